//! Exact certification of a lifted polytope, plus brute-force counting oracles.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cross3, Point3};
use crate::lifting::LiftedPolytope;
use crate::linalg::{determinant_exact, IntMatrix};
use crate::placement::{CoordinateBounds, PlacementStrategy};
use crate::planar_map::{OuterFaceSelection, PlanarMap};
use crate::Rational;

/// Outcome of the exact checks on one realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub equilibrium_ok: bool,
    pub planarity_ok: bool,
    pub convex_position_ok: bool,
    pub face_lattice_ok: bool,
    pub stress_signs_ok: bool,
    pub z_bound_ok: bool,
    pub theorem_bound_ok: bool,
    /// One line per failed check, naming the offending vertex, face or edge.
    pub witnesses: Vec<String>,
}

impl Certificate {
    pub fn all_ok(&self) -> bool {
        self.equilibrium_ok
            && self.planarity_ok
            && self.convex_position_ok
            && self.face_lattice_ok
            && self.stress_signs_ok
            && self.z_bound_ok
            && self.theorem_bound_ok
    }
}

fn sub3(a: &Point3, b: &Point3) -> [BigInt; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot3(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_zero3(a: &[BigInt; 3]) -> bool {
    a.iter().all(|c| c.is_zero())
}

/// A normal of the face from its first vertex and the first two others that
/// are not collinear with it.
fn face_normal(poly: &LiftedPolytope, face: &[usize]) -> Option<(usize, [BigInt; 3])> {
    let a = &poly.vertices[face[0]];
    for i in 1..face.len() {
        for j in i + 1..face.len() {
            let n = cross3(&sub3(&poly.vertices[face[i]], a), &sub3(&poly.vertices[face[j]], a));
            if !is_zero3(&n) {
                return Some((face[0], n));
            }
        }
    }
    None
}

fn span(vals: impl Iterator<Item = BigInt>) -> (BigInt, BigInt) {
    let v: Vec<BigInt> = vals.collect();
    (
        v.iter().min().cloned().unwrap_or_default(),
        v.iter().max().cloned().unwrap_or_default(),
    )
}

/// Realized coordinate spans `(dx, dy, dz)`.
pub fn spans(poly: &LiftedPolytope) -> [BigInt; 3] {
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (axis, slot) in out.iter_mut().enumerate() {
        let (lo, hi) = span(poly.vertices.iter().map(|p| p[axis].clone()));
        *slot = hi - lo;
    }
    out
}

/// Runs every check in exact integer (and, for the stress, rational) arithmetic.
pub fn check_realization(poly: &LiftedPolytope, map: &PlanarMap, bounds: &CoordinateBounds) -> Certificate {
    let mut witnesses = Vec::new();
    let normals: Vec<Option<(usize, [BigInt; 3])>> = poly.faces.iter().map(|f| face_normal(poly, f)).collect();

    let mut planarity_ok = true;
    for (f, face) in poly.faces.iter().enumerate() {
        let Some((base, n)) = &normals[f] else {
            planarity_ok = false;
            witnesses.push(format!("planarity: face {f} has collinear vertices"));
            continue;
        };
        if let Some(&v) = face
            .iter()
            .find(|&&v| !dot3(n, &sub3(&poly.vertices[v], &poly.vertices[*base])).is_zero())
        {
            planarity_ok = false;
            witnesses.push(format!("planarity: vertex {v} is off the plane of face {f}"));
        }
        if let Some(Some(plane)) = poly.planes.get(f) {
            for &v in face {
                let p = &poly.vertices[v];
                if &plane[0] * &p[0] + &plane[1] * &p[1] + &plane[2] != p[2] {
                    planarity_ok = false;
                    witnesses.push(format!("planarity: vertex {v} misses the lifted plane of face {f}"));
                }
            }
        }
    }

    let mut convex_position_ok = true;
    for (f, face) in poly.faces.iter().enumerate() {
        let Some((base, n)) = &normals[f] else { continue };
        let mut side = 0i32;
        for v in (0..poly.vertices.len()).filter(|v| !face.contains(v)) {
            let s = dot3(n, &sub3(&poly.vertices[v], &poly.vertices[*base]));
            let sign = if s.is_positive() {
                1
            } else if s.is_negative() {
                -1
            } else {
                0
            };
            if sign == 0 || (side != 0 && sign != side) {
                convex_position_ok = false;
                witnesses.push(format!("convex position: vertex {v} is not strictly beyond face {f}"));
                break;
            }
            side = sign;
        }
    }

    let mut face_lattice_ok = true;
    let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (f, face) in poly.faces.iter().enumerate() {
        let m = face.len();
        for i in 0..m {
            let (u, v) = (face[i], face[(i + 1) % m]);
            edge_faces.entry((u.min(v), u.max(v))).or_default().push(f);
        }
        // Consecutive turns all agree with the face normal.
        if let Some((_, n)) = &normals[f] {
            let turns: Vec<BigInt> = (0..m)
                .map(|i| {
                    let a = &poly.vertices[face[i]];
                    let b = &poly.vertices[face[(i + 1) % m]];
                    let c = &poly.vertices[face[(i + 2) % m]];
                    dot3(&cross3(&sub3(b, a), &sub3(c, b)), n)
                })
                .collect();
            if !(turns.iter().all(|t| t.is_positive()) || turns.iter().all(|t| t.is_negative())) {
                face_lattice_ok = false;
                witnesses.push(format!("face lattice: face {f} turns both ways"));
            }
        }
    }
    if edge_faces.len() != map.edges().len() {
        face_lattice_ok = false;
        witnesses.push("face lattice: edge set differs from the input map".into());
    }
    for (&(u, v), fs) in &edge_faces {
        if fs.len() != 2 {
            face_lattice_ok = false;
            witnesses.push(format!("face lattice: edge ({u},{v}) lies in {} faces", fs.len()));
            continue;
        }
        if let (Some((_, a)), Some((_, b))) = (&normals[fs[0]], &normals[fs[1]]) {
            if is_zero3(&cross3(a, b)) {
                face_lattice_ok = false;
                witnesses.push(format!("face lattice: faces {} and {} share a plane", fs[0], fs[1]));
            }
        }
    }

    let mut equilibrium_ok = true;
    let mut residual: Vec<[Rational; 2]> = vec![[Rational::zero(), Rational::zero()]; poly.vertices.len()];
    for &(u, v) in map.edges() {
        let Some(w) = poly.stress.get(u, v) else {
            equilibrium_ok = false;
            witnesses.push(format!("equilibrium: edge ({u},{v}) has no stress"));
            continue;
        };
        let (pu, pv) = (&poly.vertices[u], &poly.vertices[v]);
        let d: [Rational; 2] = std::array::from_fn(|a| w * Rational::from_integer(&pu[a] - &pv[a]));
        for (acc, x) in residual[u].iter_mut().zip(&d) {
            *acc += x;
        }
        for (acc, x) in residual[v].iter_mut().zip(&d) {
            *acc -= x;
        }
    }
    for (v, r) in residual.iter().enumerate() {
        if !r[0].is_zero() || !r[1].is_zero() {
            equilibrium_ok = false;
            witnesses.push(format!("equilibrium: vertex {v} has residual ({}, {})", r[0], r[1]));
        }
    }

    let mut stress_signs_ok = true;
    let outer = &poly.faces[poly.outer_face];
    let k = outer.len();
    let on_outer = |u: usize, v: usize| {
        (0..k).any(|i| {
            let (a, b) = (outer[i], outer[(i + 1) % k]);
            (a, b) == (u, v) || (b, a) == (u, v)
        })
    };
    for &(u, v) in map.edges() {
        let Some(w) = poly.stress.get(u, v) else { continue };
        let ok = if on_outer(u, v) {
            w.is_negative()
        } else {
            w.is_positive()
        };
        if !ok {
            stress_signs_ok = false;
            witnesses.push(format!("stress sign: edge ({u},{v}) has stress {w}"));
        }
    }

    let [dx, dy, _] = spans(poly);
    let n = BigInt::from(poly.vertices.len());
    let z_limit = BigInt::from(2) * &n * &dx * &dy;
    let mut z_bound_ok = true;
    for (v, p) in poly.vertices.iter().enumerate() {
        if p[2].is_negative() || p[2] >= z_limit {
            z_bound_ok = false;
            witnesses.push(format!("z bound: vertex {v} has z = {} outside [0, {z_limit})", p[2]));
        }
    }

    let theorem = check_theorem_bounds(poly, bounds);
    if !theorem.all() {
        witnesses.push(format!(
            "theorem bound: extents ({}, {}, {}) against bounds x<{}, y<{}, z<{}",
            theorem.extent[0], theorem.extent[1], theorem.extent[2], bounds.x, bounds.y, bounds.z
        ));
    }

    Certificate {
        equilibrium_ok,
        planarity_ok,
        convex_position_ok,
        face_lattice_ok,
        stress_signs_ok,
        z_bound_ok,
        theorem_bound_ok: theorem.all(),
        witnesses,
    }
}

/// Per-axis comparison of the coordinate extents with exclusive bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub x_ok: bool,
    pub y_ok: bool,
    pub z_ok: bool,
    /// Largest coordinate on each axis after translating the minimum to zero.
    pub extent: [BigInt; 3],
}

impl TheoremCheck {
    pub fn all(&self) -> bool {
        self.x_ok && self.y_ok && self.z_ok
    }
}

pub fn check_theorem_bounds(poly: &LiftedPolytope, bounds: &CoordinateBounds) -> TheoremCheck {
    let extent = spans(poly);
    let below = |v: &BigInt, b: &Rational| Rational::from_integer(v.clone()) < *b;
    TheoremCheck {
        x_ok: below(&extent[0], &bounds.x),
        y_ok: below(&extent[1], &bounds.y),
        z_ok: below(&extent[2], &bounds.z),
        extent,
    }
}

/// Coordinate bounds for a placement that does not match the smallest face
/// of the graph: the span bounds with `det < 6^n` substituted, and the height
/// bound `2n * dx * dy` on top.
pub fn generic_theorem_bounds(strategy: &dyn PlacementStrategy, n: usize) -> CoordinateBounds {
    let six_n = num_traits::pow(BigInt::from(6), n);
    let (bx, by) = strategy.span_bound(n, &six_n);
    let z = BigInt::from(2 * n) * &bx * &by;
    CoordinateBounds {
        x: Rational::from_integer(bx),
        y: Rational::from_integer(by),
        z: Rational::from_integer(z),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("TooLargeForBruteForce: n = {n} exceeds {limit}")]
    TooLargeForBruteForce { n: usize, limit: usize },
}

pub const BRUTE_FORCE_LIMIT: usize = 16;

/// Multigraph with edge multiplicities, vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
}

impl MultiGraph {
    fn normalized(n: usize, raw: impl IntoIterator<Item = (usize, usize, u64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (u, v, m) in raw {
            if u != v {
                *acc.entry((u.min(v), u.max(v))).or_default() += m;
            }
        }
        MultiGraph {
            n,
            edges: acc.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
        }
    }

    fn connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut parts = self.n;
        for &(u, v, _) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                parts -= 1;
            }
        }
        parts <= 1
    }

    fn without(&self, idx: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(idx);
        g
    }

    /// Merges `v` into `u` and renumbers.
    fn contract(&self, u: usize, v: usize) -> Self {
        let relabel = |x: usize| {
            let x = if x == v { u } else { x };
            if x > v {
                x - 1
            } else {
                x
            }
        };
        MultiGraph::normalized(
            self.n - 1,
            self.edges.iter().map(|&(a, b, m)| (relabel(a), relabel(b), m)),
        )
    }
}

/// Spanning trees of a multigraph by memoised deletion and contraction.
fn count_trees_dc(g: MultiGraph, memo: &mut HashMap<MultiGraph, BigInt>) -> BigInt {
    if g.n <= 1 {
        return BigInt::one();
    }
    if !g.connected() {
        return BigInt::zero();
    }
    if let Some(c) = memo.get(&g) {
        return c.clone();
    }
    // Branch on an edge at a vertex of least degree.
    let mut deg = vec![0usize; g.n];
    for &(u, v, _) in &g.edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let pivot = (0..g.n).min_by_key(|&v| deg[v]).unwrap_or(0);
    let idx = g
        .edges
        .iter()
        .position(|&(u, v, _)| u == pivot || v == pivot)
        .expect("connected graph with two vertices has an edge");
    let (u, v, m) = g.edges[idx];
    let result = count_trees_dc(g.without(idx), memo) + BigInt::from(m) * count_trees_dc(g.contract(u, v), memo);
    memo.insert(g, result.clone());
    result
}

/// Counts spanning forests in which every tree holds exactly one boundary
/// vertex, by enumerating spanning trees of the graph with the boundary
/// merged into a single vertex.
pub fn count_spanning_b_forests(map: &PlanarMap, sel: &OuterFaceSelection) -> Result<BigInt, OracleError> {
    if map.n() > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLargeForBruteForce {
            n: map.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    // Boundary collapses to vertex 0; interior vertex i becomes i + 1.
    let id = |v: usize| {
        if sel.is_boundary(v) {
            0
        } else {
            sel.position[v] - sel.k() + 1
        }
    };
    let g = MultiGraph::normalized(
        sel.interior.len() + 1,
        map.edges().iter().map(|&(u, v)| (id(u), id(v), 1)),
    );
    Ok(count_trees_dc(g, &mut HashMap::new()))
}

/// Spanning trees by enumeration (deletion and contraction).
pub fn count_spanning_trees_enumerated(map: &PlanarMap) -> Result<BigInt, OracleError> {
    if map.n() > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLargeForBruteForce {
            n: map.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let g = MultiGraph::normalized(map.n(), map.edges().iter().map(|&(u, v)| (u, v, 1)));
    Ok(count_trees_dc(g, &mut HashMap::new()))
}

/// Spanning trees by the Matrix-Tree theorem: any cofactor of the unit Laplacian.
pub fn count_spanning_trees(map: &PlanarMap) -> Result<BigInt, OracleError> {
    if map.n() > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLargeForBruteForce {
            n: map.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let m = map.n() - 1;
    let lap = IntMatrix::from_fn(m, m, |i, j| {
        if i == j {
            BigInt::from(map.degree(i))
        } else if map.has_edge(i, j) {
            BigInt::from(-1)
        } else {
            BigInt::zero()
        }
    });
    Ok(determinant_exact(&lap))
}

pub fn degree_product(map: &PlanarMap) -> BigInt {
    (0..map.n()).map(|v| BigInt::from(map.degree(v))).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::laplacian::{assemble_laplacian, StressAssignment};
    use crate::pipeline::{realize, Options};
    use crate::planar_map::{choose_outer_face, validate, RawMap};

    fn det_and_forests(raw: &RawMap, face: Option<usize>) -> (BigInt, BigInt) {
        let map = validate(raw).unwrap();
        let sel = choose_outer_face(&map, face).unwrap();
        let blocks = assemble_laplacian(&map, &sel, &StressAssignment::unit_interior(&map, &sel)).unwrap();
        (
            blocks.det_reduced_integer().unwrap(),
            count_spanning_b_forests(&map, &sel).unwrap(),
        )
    }

    #[test]
    fn forest_counts_match_known_values() {
        assert_eq!(det_and_forests(&corpus::tetrahedron(), None), (3.into(), 3.into()));
        assert_eq!(det_and_forests(&corpus::cube(), None), (45.into(), 45.into()));
        assert_eq!(
            det_and_forests(&corpus::seven_vertex(), Some(corpus::SEVEN_VERTEX_OUTER_FACE)),
            (95.into(), 95.into())
        );
    }

    #[test]
    fn spanning_tree_counts() {
        let tetra = validate(&corpus::tetrahedron()).unwrap();
        assert_eq!(count_spanning_trees(&tetra).unwrap(), BigInt::from(16));
        let cube = validate(&corpus::cube()).unwrap();
        assert_eq!(count_spanning_trees(&cube).unwrap(), BigInt::from(384));
        assert_eq!(count_spanning_trees_enumerated(&cube).unwrap(), BigInt::from(384));
        let map = validate(&corpus::seven_vertex()).unwrap();
        let t = count_spanning_trees(&map).unwrap();
        assert_eq!(t, count_spanning_trees_enumerated(&map).unwrap());
        assert!(BigInt::from(95) < t && t < degree_product(&map));
    }

    #[test]
    fn oracle_guard() {
        let big = validate(&corpus::dodecahedron()).unwrap();
        assert!(matches!(
            count_spanning_trees(&big),
            Err(OracleError::TooLargeForBruteForce { n: 20, .. })
        ));
    }

    #[test]
    fn pipeline_outputs_certify() {
        for raw in [
            corpus::tetrahedron(),
            corpus::cube(),
            corpus::dodecahedron(),
            corpus::antiprism(5),
        ] {
            let r = realize(&raw, &Options::default()).unwrap();
            let cert = r.certificate.clone().unwrap();
            assert!(cert.all_ok(), "{:?}", cert.witnesses);
        }
    }

    #[test]
    fn perturbed_height_breaks_planarity() {
        let r = realize(&corpus::tetrahedron(), &Options::default()).unwrap();
        let mut poly = r.polytope.clone();
        poly.vertices[3][2] += 1;
        let cert = check_realization(&poly, &r.map, &r.theorem_bounds);
        assert!(!cert.planarity_ok);
        assert!(cert.witnesses.iter().any(|w| w.contains("face")));

        let r = realize(&corpus::cube(), &Options::default()).unwrap();
        let mut poly = r.polytope.clone();
        poly.vertices[0][2] += 1;
        let cert = check_realization(&poly, &r.map, &r.theorem_bounds);
        assert!(!cert.planarity_ok);
    }

    #[test]
    fn flipped_stress_sign_is_reported() {
        let r = realize(&corpus::cube(), &Options::default()).unwrap();
        let mut poly = r.polytope.clone();
        let (u, v) = r.map.edges()[0];
        let w = poly.stress.weight(u, v).clone();
        poly.stress.set(u, v, -w);
        let cert = check_realization(&poly, &r.map, &r.theorem_bounds);
        assert!(!cert.stress_signs_ok && !cert.equilibrium_ok);
    }

    #[test]
    fn generic_bounds_dominate_specific_ones() {
        let reg = crate::placement::StrategyRegistry::default();
        for name in reg.names() {
            let s = reg.get(name).unwrap();
            let g = generic_theorem_bounds(s, 12);
            assert!(g.z.is_positive() && g.x.is_positive() && g.y.is_positive());
        }
    }
}
