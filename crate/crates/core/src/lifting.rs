//! Lifting a plane equilibrium embedding to a convex polytope, face by face.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{signed_area2, Point2, Point3};
use crate::laplacian::StressAssignment;
use crate::planar_map::PlanarMap;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftingError {
    #[error("PathInconsistency: planes of faces {left} and {right} disagree across edge ({u},{v})")]
    PathInconsistency {
        left: usize,
        right: usize,
        u: usize,
        v: usize,
    },
    #[error("InconsistentHeight: faces disagree on the height of vertex {vertex}")]
    InconsistentHeight { vertex: usize },
    #[error("UnreachableFace: face {face} is not reached through interior edges")]
    UnreachableFace { face: usize },
    #[error("NoStartFace: edge ({u},{v}) has no interior face")]
    NoStartFace { u: usize, v: usize },
    #[error("DegenerateFace: face {face} has zero signed area")]
    DegenerateFace { face: usize },
    #[error("NonIntegralLifting: {what} is not an integer")]
    NonIntegral { what: String },
}

/// The plane `z = <a, p> + d` carrying a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePlane {
    pub a: Point2,
    pub d: Rational,
}

impl FacePlane {
    pub fn origin() -> Self {
        FacePlane {
            a: Point2::zero(),
            d: Rational::zero(),
        }
    }

    pub fn height(&self, p: &Point2) -> Rational {
        self.a.dot(p) + &self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    BreadthFirst,
    DepthFirst,
}

/// +1 if the listed interior faces run counterclockwise in the embedding,
/// -1 if clockwise.
pub fn face_orientation(map: &PlanarMap, outer: usize, coords: &[Point2]) -> Result<i32, LiftingError> {
    let f = (0..map.face_count()).find(|&f| f != outer).expect("at least two faces");
    let poly: Vec<&Point2> = map.face(f).iter().map(|&v| &coords[v]).collect();
    let area = signed_area2(&poly);
    if area.is_zero() {
        return Err(LiftingError::DegenerateFace { face: f });
    }
    Ok(if area.is_positive() { 1 } else { -1 })
}

/// The interior face across the boundary edge `(u, v)`.
pub fn choose_f1(map: &PlanarMap, outer: usize, u: usize, v: usize) -> Result<usize, LiftingError> {
    [map.face_of_dart(u, v), map.face_of_dart(v, u)]
        .into_iter()
        .flatten()
        .find(|&f| f != outer)
        .ok_or(LiftingError::NoStartFace { u, v })
}

/// An interior dual edge: the primal edge `(u, v)` with the face holding
/// dart `(u, v)` and the face holding dart `(v, u)`.
struct DualEdge {
    u: usize,
    v: usize,
    with_dart: usize,
    against_dart: usize,
}

fn interior_dual_edges(map: &PlanarMap, outer: usize) -> Vec<DualEdge> {
    map.edges()
        .iter()
        .filter_map(|&(u, v)| {
            let f = map.face_of_dart(u, v)?;
            let g = map.face_of_dart(v, u)?;
            (f != outer && g != outer).then_some(DualEdge {
                u,
                v,
                with_dart: f,
                against_dart: g,
            })
        })
        .collect()
}

/// Plane of the face on the far side of an edge from `from`.
///
/// For a directed edge `i -> j` with face `l` on its left and `r` on its
/// right: `a_l = w (p_i - p_j)^perp + a_r` and `d_l = w <p_i, p_j^perp> + d_r`.
fn across(
    e: &DualEdge,
    from: usize,
    from_plane: &FacePlane,
    coords: &[Point2],
    w: &Rational,
    orientation: i32,
) -> (usize, FacePlane) {
    // With counterclockwise faces the face holding dart (u, v) lies left of u -> v.
    let left_of_uv = if orientation > 0 { e.with_dart } else { e.against_dart };
    let to = if from == e.with_dart {
        e.against_dart
    } else {
        e.with_dart
    };
    let (i, j) = if to == left_of_uv { (e.u, e.v) } else { (e.v, e.u) };
    let (pi, pj) = (&coords[i], &coords[j]);
    let a = &(&(pi - pj).perp() * w) + &from_plane.a;
    let d = w * pi.dot(&pj.perp()) + &from_plane.d;
    (to, FacePlane { a, d })
}

/// Computes every interior face plane from `f1` (fixed to `z = 0`) through
/// interior edges only, then checks every interior edge for consistency.
pub fn propagate_planes(
    map: &PlanarMap,
    outer: usize,
    coords: &[Point2],
    stress: &StressAssignment,
    f1: usize,
    orientation: i32,
    traversal: Traversal,
) -> Result<Vec<Option<FacePlane>>, LiftingError> {
    let dual = interior_dual_edges(map, outer);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); map.face_count()];
    for (idx, e) in dual.iter().enumerate() {
        incident[e.with_dart].push(idx);
        incident[e.against_dart].push(idx);
    }
    let mut planes: Vec<Option<FacePlane>> = vec![None; map.face_count()];
    planes[f1] = Some(FacePlane::origin());
    let mut work = VecDeque::from([f1]);
    while let Some(f) = match traversal {
        Traversal::BreadthFirst => work.pop_front(),
        Traversal::DepthFirst => work.pop_back(),
    } {
        let here = planes[f].clone().expect("queued faces have planes");
        let order: Vec<usize> = match traversal {
            Traversal::BreadthFirst => incident[f].clone(),
            Traversal::DepthFirst => incident[f].iter().rev().copied().collect(),
        };
        for idx in order {
            let e = &dual[idx];
            let w = stress.weight(e.u, e.v);
            let (to, plane) = across(e, f, &here, coords, w, orientation);
            if planes[to].is_none() {
                planes[to] = Some(plane);
                work.push_back(to);
            }
        }
    }
    if let Some(face) = (0..map.face_count()).find(|&f| f != outer && planes[f].is_none()) {
        return Err(LiftingError::UnreachableFace { face });
    }
    for e in &dual {
        let w = stress.weight(e.u, e.v);
        let from = planes[e.against_dart].as_ref().expect("all interior faces reached");
        let (to, plane) = across(e, e.against_dart, from, coords, w, orientation);
        if planes[to].as_ref() != Some(&plane) {
            return Err(LiftingError::PathInconsistency {
                left: to,
                right: e.against_dart,
                u: e.u,
                v: e.v,
            });
        }
    }
    Ok(planes)
}

/// Heights of all vertices, read off every interior face that contains them.
pub fn lift_vertices(
    map: &PlanarMap,
    outer: usize,
    coords: &[Point2],
    planes: &[Option<FacePlane>],
) -> Result<Vec<Rational>, LiftingError> {
    let mut z: Vec<Option<Rational>> = vec![None; map.n()];
    for f in (0..map.face_count()).filter(|&f| f != outer) {
        let plane = planes[f].as_ref().ok_or(LiftingError::UnreachableFace { face: f })?;
        for &v in map.face(f) {
            let h = plane.height(&coords[v]);
            match &z[v] {
                None => z[v] = Some(h),
                Some(prev) if *prev != h => return Err(LiftingError::InconsistentHeight { vertex: v }),
                Some(_) => {}
            }
        }
    }
    z.into_iter()
        .enumerate()
        .map(|(v, h)| h.ok_or(LiftingError::InconsistentHeight { vertex: v }))
        .collect()
}

/// A lifting normalised so that the lowest vertex has height zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub f1: usize,
    pub orientation: i32,
    /// Planes after normalisation; `None` for the outer face.
    pub planes: Vec<Option<FacePlane>>,
    pub heights: Vec<Rational>,
    /// Heights before normalisation (the start face at zero).
    pub raw_heights: Vec<Rational>,
}

/// Lifts with a breadth-first traversal and confirms the result with a
/// depth-first one.
pub fn lift(
    map: &PlanarMap,
    outer: usize,
    coords: &[Point2],
    stress: &StressAssignment,
    f1: usize,
) -> Result<Lifting, LiftingError> {
    let orientation = face_orientation(map, outer, coords)?;
    let planes = propagate_planes(map, outer, coords, stress, f1, orientation, Traversal::BreadthFirst)?;
    let second = propagate_planes(map, outer, coords, stress, f1, orientation, Traversal::DepthFirst)?;
    if let Some(face) = (0..planes.len()).find(|&f| planes[f] != second[f]) {
        return Err(LiftingError::PathInconsistency {
            left: face,
            right: f1,
            u: 0,
            v: 0,
        });
    }
    let raw_heights = lift_vertices(map, outer, coords, &planes)?;
    let lowest = raw_heights.iter().min().cloned().unwrap_or_else(Rational::zero);
    let heights = raw_heights.iter().map(|z| z - &lowest).collect();
    let planes = planes
        .into_iter()
        .map(|p| {
            p.map(|p| FacePlane {
                a: p.a,
                d: p.d - &lowest,
            })
        })
        .collect();
    Ok(Lifting {
        f1,
        orientation,
        planes,
        heights,
        raw_heights,
    })
}

/// Integer plane `z = ax * x + ay * y + d`.
pub type IntPlane = [BigInt; 3];

/// A polytope with integer vertices and the face structure of the input map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedPolytope {
    pub vertices: Vec<Point3>,
    pub faces: Vec<Vec<usize>>,
    pub outer_face: usize,
    /// Planes of all faces but the outer one.
    pub planes: Vec<Option<IntPlane>>,
    /// The full equilibrium stress, boundary edges included.
    pub stress: StressAssignment,
}

fn to_int(r: &Rational, what: impl Fn() -> String) -> Result<BigInt, LiftingError> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(LiftingError::NonIntegral { what: what() })
    }
}

impl LiftedPolytope {
    /// Assembles the polytope; every coordinate and plane parameter must be integral.
    pub fn from_lifting(
        map: &PlanarMap,
        outer: usize,
        coords: &[Point2],
        lifting: &Lifting,
        stress: StressAssignment,
    ) -> Result<Self, LiftingError> {
        let mut vertices = Vec::with_capacity(map.n());
        for (v, p) in coords.iter().enumerate() {
            vertices.push([
                to_int(&p.x, || format!("x of vertex {v}"))?,
                to_int(&p.y, || format!("y of vertex {v}"))?,
                to_int(&lifting.heights[v], || format!("z of vertex {v}"))?,
            ]);
        }
        let mut planes = Vec::with_capacity(map.face_count());
        for (f, p) in lifting.planes.iter().enumerate() {
            planes.push(match p {
                None => None,
                Some(p) => Some([
                    to_int(&p.a.x, || format!("plane of face {f}"))?,
                    to_int(&p.a.y, || format!("plane of face {f}"))?,
                    to_int(&p.d, || format!("plane of face {f}"))?,
                ]),
            });
        }
        Ok(LiftedPolytope {
            vertices,
            faces: map.faces().to_vec(),
            outer_face: outer,
            planes,
            stress,
        })
    }

    pub fn max_height(&self) -> BigInt {
        self.vertices.iter().map(|p| p[2].clone()).max().unwrap_or_default()
    }
}
