//! Outer-face placement: classification, relabeling, boundary coordinates and
//! boundary stresses, organised as a registry of named strategies.

mod type3;
mod type4;
mod type5a;
mod type5b;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::SubstitutionStress;
use crate::geometry::{is_strictly_convex, Point2};
use crate::linalg::{solve_exact, RationalMatrix};
use crate::planar_map::OuterFaceSelection;
use crate::Rational;

pub use type3::TrianglePlacement;
pub use type4::QuadPlacement;
pub use type5a::PentagonSquarePlacement;
pub use type5b::PentagonKitePlacement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseType {
    Type3,
    Type4,
    Type5A,
    Type5B,
}

impl CaseType {
    pub fn label(self) -> &'static str {
        match self {
            CaseType::Type3 => "3",
            CaseType::Type4 => "4",
            CaseType::Type5A => "5A",
            CaseType::Type5B => "5B",
        }
    }
}

impl fmt::Display for CaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlacementError {
    #[error("NoValidRelabeling: no symmetry of the {k}-gon satisfies the ordering conditions")]
    NoValidRelabeling { k: usize },
    #[error("ConvexityViolation: placed outer face is not a strictly convex counterclockwise polygon ({case})")]
    ConvexityViolation { case: CaseType },
    #[error("UnknownStrategy: '{0}'")]
    UnknownStrategy(String),
    #[error("StrategyNotApplicable: '{name}' places {expected}-gons but the outer face has {k} vertices")]
    FaceSizeMismatch { name: String, expected: usize, k: usize },
    #[error("StrategyNotApplicable: '{name}' admits no relabeling of these substitution stresses")]
    NotApplicable { name: String },
}

impl PlacementError {
    /// True for violations of proven invariants (as opposed to bad requests).
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            PlacementError::NoValidRelabeling { .. } | PlacementError::ConvexityViolation { .. }
        )
    }
}

/// A dihedral symmetry of the boundary: new label `i` is old label `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub perm: Vec<usize>,
    pub reflected: bool,
}

impl Relabeling {
    pub fn identity(k: usize) -> Self {
        Relabeling {
            perm: (0..k).collect(),
            reflected: false,
        }
    }

    pub fn rotation(k: usize, r: usize) -> Self {
        Relabeling {
            perm: (0..k).map(|i| (i + r) % k).collect(),
            reflected: false,
        }
    }

    pub fn reflection(k: usize, r: usize) -> Self {
        Relabeling {
            perm: (0..k).map(|i| (r + k - i) % k).collect(),
            reflected: true,
        }
    }

    /// Identity, then rotations, then reflections.
    pub fn dihedral(k: usize) -> Vec<Relabeling> {
        let mut out: Vec<Relabeling> = (0..k).map(|r| Relabeling::rotation(k, r)).collect();
        out.extend((0..k).map(|r| Relabeling::reflection(k, r)));
        out
    }

    pub fn cyclic(k: usize) -> Vec<Relabeling> {
        (0..k).map(|r| Relabeling::rotation(k, r)).collect()
    }
}

/// Upper bounds (exclusive) on the final coordinates, as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateBounds {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

/// Accessor for 1-based weights, matching the usual `w(1,3)` notation.
pub(crate) struct W<'a>(pub &'a SubstitutionStress);

impl W<'_> {
    pub fn at(&self, i: usize, j: usize) -> Rational {
        self.0.get(i - 1, j - 1).clone()
    }
}

pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub(crate) fn big(det: &BigInt) -> Rational {
    Rational::from_integer(det.clone())
}

pub(crate) fn pow(base: &Rational, e: usize) -> Rational {
    num_traits::pow(base.clone(), e)
}

/// One way of placing the outer face.
///
/// All stress arguments are already relabeled.
pub trait PlacementStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn case_type(&self) -> CaseType;
    fn face_size(&self) -> usize;

    /// Candidate relabelings, tried in order.
    fn relabelings(&self) -> Vec<Relabeling> {
        Relabeling::dihedral(self.face_size())
    }

    /// Whether the labelled stresses satisfy this case's preconditions.
    fn admits(&self, w: &SubstitutionStress) -> bool;

    /// Boundary coordinates in label order.
    fn positions(&self, w: &SubstitutionStress) -> Vec<Point2>;

    /// Named intermediate quantities (e.g. a free coordinate) for reporting.
    fn derived(&self, w: &SubstitutionStress) -> Vec<(&'static str, Rational)>;

    /// Stresses on the outer cycle, edge `(i, i+1)` at index `i`.
    fn boundary_stresses(&self, w: &SubstitutionStress) -> Vec<Rational>;

    /// Boundary-only scaling factors; the full factors are these times `det`.
    fn boundary_scale(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational);

    /// Closed-form coordinate spans after scaling.
    fn span_formula(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational);

    /// Span bounds with the weights eliminated.
    fn span_bound(&self, n: usize, det: &BigInt) -> (BigInt, BigInt);

    /// Coordinate bounds for graphs whose smallest face has this size.
    fn theorem_bounds(&self, n: usize) -> CoordinateBounds;
}

/// The result of classifying and placing the outer face.
#[derive(Debug, Clone)]
pub struct BoundaryPlacement {
    pub case_type: CaseType,
    pub strategy: &'static str,
    pub relabel: Relabeling,
    /// Substitution stresses under `relabel`.
    pub stresses: SubstitutionStress,
    /// Boundary coordinates in label order.
    pub coords: Vec<Point2>,
    pub derived: Vec<(&'static str, Rational)>,
    /// Stress on edge `(p_i, p_{i+1})` at index `i`.
    pub boundary_stresses: Vec<Rational>,
}

impl BoundaryPlacement {
    /// Vertex ids of `p_1..p_k` after relabeling.
    pub fn labelled_vertices(&self, sel: &OuterFaceSelection) -> Vec<usize> {
        self.relabel.perm.iter().map(|&i| sel.boundary[i]).collect()
    }

    /// Boundary coordinates in the selection's own boundary order.
    pub fn coords_in_selection_order(&self) -> Vec<Point2> {
        let mut out = vec![Point2::zero(); self.coords.len()];
        for (label, &orig) in self.relabel.perm.iter().enumerate() {
            out[orig] = self.coords[label].clone();
        }
        out
    }
}

/// Named placement strategies.
pub struct StrategyRegistry {
    strategies: Vec<Box<dyn PlacementStrategy>>,
}

pub const AUTO: &str = "auto";

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut reg = StrategyRegistry::empty();
        reg.register(Box::new(TrianglePlacement));
        reg.register(Box::new(QuadPlacement));
        reg.register(Box::new(PentagonSquarePlacement));
        reg.register(Box::new(PentagonKitePlacement));
        reg
    }
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { strategies: Vec::new() }
    }

    /// Adds a strategy; a later registration under the same name replaces the earlier one.
    pub fn register(&mut self, s: Box<dyn PlacementStrategy>) {
        self.strategies.retain(|t| t.name() != s.name());
        self.strategies.push(s);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn PlacementStrategy> {
        self.strategies.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn for_case(&self, case: CaseType) -> Option<&dyn PlacementStrategy> {
        self.strategies
            .iter()
            .find(|s| s.case_type() == case)
            .map(|s| s.as_ref())
    }

    /// Picks the strategy and relabeling, then places the boundary.
    ///
    /// With `choice` of `None` or `"auto"` the first relabeling admitted by
    /// any strategy for this face size wins; a named strategy is tried alone.
    pub fn classify(
        &self,
        sub: &SubstitutionStress,
        choice: Option<&str>,
    ) -> Result<BoundaryPlacement, PlacementError> {
        let k = sub.k();
        let candidates: Vec<&dyn PlacementStrategy> = match choice {
            None | Some(AUTO) => self
                .strategies
                .iter()
                .filter(|s| s.face_size() == k)
                .map(|s| s.as_ref())
                .collect(),
            Some(name) => {
                let s = self
                    .get(name)
                    .ok_or_else(|| PlacementError::UnknownStrategy(name.to_string()))?;
                if s.face_size() != k {
                    return Err(PlacementError::FaceSizeMismatch {
                        name: name.to_string(),
                        expected: s.face_size(),
                        k,
                    });
                }
                vec![s]
            }
        };
        let relabelings = match candidates.first() {
            Some(s) => s.relabelings(),
            None => Relabeling::dihedral(k),
        };
        for relabel in relabelings {
            let w = sub.relabeled(&relabel.perm);
            if let Some(s) = candidates.iter().find(|s| s.admits(&w)) {
                return place_with(*s, w, relabel);
            }
        }
        match choice {
            None | Some(AUTO) => Err(PlacementError::NoValidRelabeling { k }),
            Some(name) => Err(PlacementError::NotApplicable { name: name.to_string() }),
        }
    }
}

fn place_with(
    s: &dyn PlacementStrategy,
    w: SubstitutionStress,
    relabel: Relabeling,
) -> Result<BoundaryPlacement, PlacementError> {
    let coords = s.positions(&w);
    let refs: Vec<&Point2> = coords.iter().collect();
    if !is_strictly_convex(&refs, 1) {
        return Err(PlacementError::ConvexityViolation { case: s.case_type() });
    }
    Ok(BoundaryPlacement {
        case_type: s.case_type(),
        strategy: s.name(),
        derived: s.derived(&w),
        boundary_stresses: s.boundary_stresses(&w),
        coords,
        stresses: w,
        relabel,
    })
}

/// Solves the boundary equilibrium equations for the outer-cycle stresses
/// directly: at each `p_i`, the substitution forces plus the two outer-cycle
/// edge forces must cancel. Returns `None` if the system has no solution.
pub fn solve_boundary_stresses(w: &SubstitutionStress, coords: &[Point2]) -> Option<Vec<Rational>> {
    let k = coords.len();
    let mut a = RationalMatrix::zeros(2 * k, k);
    let mut rhs = RationalMatrix::zeros(2 * k, 1);
    for i in 0..k {
        let mut f = Point2::zero();
        for j in (0..k).filter(|&j| j != i) {
            f = &f + &(&(&coords[i] - &coords[j]) * w.get(i, j));
        }
        let next = &coords[i] - &coords[(i + 1) % k];
        let prev = &coords[i] - &coords[(i + k - 1) % k];
        let e_prev = (i + k - 1) % k;
        a[(2 * i, i)] += &next.x;
        a[(2 * i + 1, i)] += &next.y;
        a[(2 * i, e_prev)] += &prev.x;
        a[(2 * i + 1, e_prev)] += &prev.y;
        rhs[(2 * i, 0)] = -f.x;
        rhs[(2 * i + 1, 0)] = -f.y;
    }
    // Normal equations are square; the residual check below rejects inconsistency.
    let at = a.transpose();
    let ata = at.mul(&a).ok()?;
    let atb = at.mul(&rhs).ok()?;
    let sol = solve_exact(&ata, &atb).ok()?;
    let check = a.mul(&sol).ok()?;
    if check != rhs {
        return None;
    }
    Some((0..k).map(|i| sol[(i, 0)].clone()).collect())
}

/// True when every weight in the list is strictly negative.
pub fn all_negative(ws: &[Rational]) -> bool {
    ws.iter().all(|w| w.is_negative())
}

/// Parses `auto` or a registered strategy name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyChoice {
    Auto,
    Named(String),
}

impl StrategyChoice {
    pub fn as_option(&self) -> Option<&str> {
        match self {
            StrategyChoice::Auto => None,
            StrategyChoice::Named(s) => Some(s),
        }
    }
}

impl FromStr for StrategyChoice {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(if s == AUTO {
            StrategyChoice::Auto
        } else {
            StrategyChoice::Named(s.to_string())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::equilibrium::{equilibrium_residuals, substitution_stresses, tutte_interior};
    use crate::laplacian::{assemble_laplacian, StressAssignment};
    use crate::planar_map::{choose_outer_face, validate, PlanarMap, RawMap};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn sym(k: usize, entries: &[((usize, usize), Rational)], fill: Rational) -> SubstitutionStress {
        let mut m = RationalMatrix::from_fn(k, k, |i, j| if i == j { Rational::zero() } else { fill.clone() });
        for ((i, j), v) in entries {
            m[(i - 1, j - 1)] = v.clone();
            m[(j - 1, i - 1)] = v.clone();
        }
        SubstitutionStress::from_weights(m, int(1))
    }

    struct Pipeline {
        map: PlanarMap,
        sel: OuterFaceSelection,
        sub: SubstitutionStress,
        blocks: crate::laplacian::LaplacianBlocks,
    }

    fn prepare(raw: &RawMap, face: Option<usize>) -> Pipeline {
        let map = validate(raw).unwrap();
        let sel = choose_outer_face(&map, face).unwrap();
        let stress = StressAssignment::unit_interior(&map, &sel);
        let blocks = assemble_laplacian(&map, &sel, &stress).unwrap();
        let sub = substitution_stresses(&blocks).unwrap();
        Pipeline { map, sel, sub, blocks }
    }

    /// Places, embeds and checks that the full stress is in equilibrium everywhere.
    fn full_equilibrium(p: &Pipeline, choice: Option<&str>) -> BoundaryPlacement {
        let reg = StrategyRegistry::default();
        let placement = reg.classify(&p.sub, choice).unwrap();
        let emb = tutte_interior(&p.blocks, &placement.coords_in_selection_order()).unwrap();
        let labels = placement.labelled_vertices(&p.sel);
        let k = labels.len();
        let mut stress = StressAssignment::unit_interior(&p.map, &p.sel);
        for i in 0..k {
            stress.set(labels[i], labels[(i + 1) % k], placement.boundary_stresses[i].clone());
        }
        let res = equilibrium_residuals(&p.map, &emb.coords, &stress);
        assert!(res.iter().all(|r| r.is_zero()), "residual {res:?}");
        assert!(all_negative(&placement.boundary_stresses));
        let oracle = solve_boundary_stresses(&placement.stresses, &placement.coords).unwrap();
        assert_eq!(oracle, placement.boundary_stresses);
        placement
    }

    #[test]
    fn dihedral_order() {
        let d = Relabeling::dihedral(5);
        assert_eq!(d.len(), 10);
        assert_eq!(d[0].perm, vec![0, 1, 2, 3, 4]);
        assert_eq!(d[1].perm, vec![1, 2, 3, 4, 0]);
        assert_eq!(d[5].perm, vec![0, 4, 3, 2, 1]);
        assert!(d[5].reflected && !d[4].reflected);
    }

    #[test]
    fn registry_lookup() {
        let reg = StrategyRegistry::default();
        assert_eq!(reg.names(), vec!["type3", "type4", "type5a", "type5b"]);
        assert_eq!(reg.get("type5b").unwrap().case_type(), CaseType::Type5B);
        assert!(reg.get("hexagon").is_none());
        assert_eq!(reg.for_case(CaseType::Type4).unwrap().face_size(), 4);
    }

    #[test]
    fn tetrahedron_is_type3() {
        let p = prepare(&corpus::tetrahedron(), None);
        let placement = full_equilibrium(&p, None);
        assert_eq!(placement.case_type, CaseType::Type3);
        assert_eq!(placement.boundary_stresses, vec![q(-1, 3); 3]);
        assert_eq!(placement.relabel, Relabeling::identity(3));
    }

    #[test]
    fn dodecahedron_is_5a() {
        let p = prepare(&corpus::dodecahedron(), None);
        let placement = full_equilibrium(&p, None);
        assert_eq!(placement.case_type, CaseType::Type5A);
        assert_eq!(placement.coords[4], Point2::new(q(-1, 3), q(1, 2)));
        assert_eq!(placement.relabel, Relabeling::identity(5));
    }

    #[test]
    fn kite_example_is_5b() {
        let t = q(1, 100);
        let w = sym(
            5,
            &[
                ((3, 5), int(1)),
                ((2, 5), int(1)),
                ((1, 3), t.clone()),
                ((1, 4), t.clone()),
                ((2, 4), t),
            ],
            int(1),
        );
        let reg = StrategyRegistry::default();
        let placement = reg.classify(&w, None).unwrap();
        assert_eq!(placement.case_type, CaseType::Type5B);
        assert_eq!(placement.relabel, Relabeling::identity(5));
        let y2 = placement.coords[1].y.clone();
        let y3 = placement.coords[2].y.clone();
        assert!(int(-2) < y2 && y2 < y3 && y3 < int(2));
        // -2 (0.0001 + 0.01 + 0.01 + 2 - 0.0001 - 0.02 - 0.01) / (0.01 + 0.01 + 2)
        assert_eq!(y2, q(-398, 202));
        assert_eq!(y3, q(398, 202));
        let oracle = solve_boundary_stresses(&placement.stresses, &placement.coords).unwrap();
        assert_eq!(oracle, placement.boundary_stresses);
    }

    #[test]
    fn type4_equal_weights() {
        let t = q(2, 7);
        let w = sym(4, &[], t.clone());
        let reg = StrategyRegistry::default();
        let placement = reg.classify(&w, None).unwrap();
        assert_eq!(placement.case_type, CaseType::Type4);
        assert_eq!(placement.coords[2], Point2::from_ints(2, 1));
        let expect = vec![int(-3) * &t, int(-2) * &t, q(-3, 2) * &t, int(-2) * &t];
        assert_eq!(placement.boundary_stresses, expect);
    }

    #[test]
    fn type4_relabels_by_rotation() {
        let w = sym(4, &[((1, 3), int(1)), ((2, 4), int(3))], int(1));
        let placement = StrategyRegistry::default().classify(&w, None).unwrap();
        assert_eq!(placement.relabel.perm, vec![1, 2, 3, 0]);
        assert!(placement.stresses.get(0, 2) >= placement.stresses.get(1, 3));
    }

    #[test]
    fn cube_is_type4_in_equilibrium() {
        let p = prepare(&corpus::cube(), None);
        let placement = full_equilibrium(&p, None);
        assert_eq!(placement.case_type, CaseType::Type4);
        let y3 = &placement.derived[0].1;
        assert!(y3.is_positive() && y3 <= &int(1));
    }

    #[test]
    fn forced_strategy_errors() {
        let p = prepare(&corpus::tetrahedron(), None);
        let reg = StrategyRegistry::default();
        assert!(matches!(
            reg.classify(&p.sub, Some("type4")),
            Err(PlacementError::FaceSizeMismatch { .. })
        ));
        assert!(matches!(
            reg.classify(&p.sub, Some("nope")),
            Err(PlacementError::UnknownStrategy(_))
        ));
        let d = prepare(&corpus::dodecahedron(), None);
        // Equal diagonals always satisfy the square-placement condition.
        assert!(matches!(
            reg.classify(&d.sub, Some("type5b")),
            Err(PlacementError::NotApplicable { .. })
        ));
    }

    #[test]
    fn classification_is_stable_under_its_relabeling() {
        for raw in [
            corpus::dodecahedron(),
            corpus::barrel(7),
            corpus::cube(),
            corpus::prism(6),
        ] {
            let p = prepare(&raw, None);
            let reg = StrategyRegistry::default();
            let first = reg.classify(&p.sub, None).unwrap();
            let again = reg.classify(&first.stresses, None).unwrap();
            assert_eq!(again.case_type, first.case_type);
            assert_eq!(again.relabel, Relabeling::identity(first.relabel.perm.len()));
        }
    }

    fn positive_weight() -> impl Strategy<Value = Rational> {
        (1i64..60, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn pentagon_closed_forms_match_oracle(ws in proptest::collection::vec(positive_weight(), 10)) {
            let mut m = RationalMatrix::zeros(5, 5);
            let mut t = 0;
            for i in 0..5 {
                for j in i + 1..5 {
                    m[(i, j)] = ws[t].clone();
                    m[(j, i)] = ws[t].clone();
                    t += 1;
                }
            }
            let w = SubstitutionStress::from_weights(m, int(1));
            let placement = StrategyRegistry::default().classify(&w, None).unwrap();
            let ww = W(&placement.stresses);
            prop_assert!(ww.at(3, 5) >= ww.at(2, 4) && ww.at(2, 5) >= ww.at(1, 3));
            let oracle = solve_boundary_stresses(&placement.stresses, &placement.coords).unwrap();
            prop_assert_eq!(&oracle, &placement.boundary_stresses);
            let again = StrategyRegistry::default().classify(&placement.stresses, None).unwrap();
            prop_assert_eq!(again.case_type, placement.case_type);
        }

        #[test]
        fn quad_closed_forms_match_oracle(ws in proptest::collection::vec(positive_weight(), 6)) {
            let mut m = RationalMatrix::zeros(4, 4);
            let mut t = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    m[(i, j)] = ws[t].clone();
                    m[(j, i)] = ws[t].clone();
                    t += 1;
                }
            }
            let w = SubstitutionStress::from_weights(m, int(1));
            let placement = StrategyRegistry::default().classify(&w, None).unwrap();
            let y3 = placement.coords[2].y.clone();
            prop_assert!(y3.is_positive() && y3 <= int(1));
            let oracle = solve_boundary_stresses(&placement.stresses, &placement.coords).unwrap();
            prop_assert_eq!(oracle, placement.boundary_stresses);
        }

        #[test]
        fn random_maps_reach_full_equilibrium(seed in 0u64..50_000, n in 8usize..22, kind in 0usize..3) {
            let raw = match kind {
                0 => corpus::random_triangle_map(n, seed),
                1 => corpus::random_quad_map(n, seed),
                _ => corpus::random_pentagon_map(n, seed),
            };
            let p = prepare(&raw, None);
            full_equilibrium(&p, None);
        }

        #[test]
        fn overridden_pentagon_faces_reach_full_equilibrium(seed in 0u64..50_000, n in 8usize..22, pick in 0usize..32) {
            let raw = corpus::random_triangle_map(n, seed);
            let map = validate(&raw).unwrap();
            let faces: Vec<usize> = (0..map.face_count()).filter(|&f| (4..=5).contains(&map.face(f).len())).collect();
            prop_assume!(!faces.is_empty());
            let p = prepare(&raw, Some(faces[pick % faces.len()]));
            full_equilibrium(&p, None);
        }
    }
}
