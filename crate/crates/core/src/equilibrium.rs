//! Barycentric interior embedding, substitution stresses and boundary forces.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{is_strictly_convex, Point2};
use crate::laplacian::{LaplacianBlocks, StressAssignment};
use crate::linalg::{solve_exact, LinalgError, RationalMatrix};
use crate::planar_map::{OuterFaceSelection, PlanarMap};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquilibriumError {
    #[error("SingularReducedLaplacian: {0}")]
    SingularReducedLaplacian(LinalgError),
    #[error("SchurNotLaplacian: {0}")]
    SchurNotLaplacian(String),
    #[error("BoundaryArity: expected {expected} boundary points, got {got}")]
    BoundaryArity { expected: usize, got: usize },
}

/// Pairwise weights between boundary vertices that summarize the interior.
///
/// Entry `(i, j)` is the weight between the boundary vertices labelled `i` and
/// `j` (0-based); the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionStress {
    omega: RationalMatrix,
    det_reduced: Rational,
}

impl SubstitutionStress {
    /// Builds from an explicit symmetric weight matrix (diagonal ignored).
    pub fn from_weights(omega: RationalMatrix, det_reduced: Rational) -> Self {
        let k = omega.rows();
        let omega = RationalMatrix::from_fn(k, k, |i, j| {
            if i == j {
                Rational::zero()
            } else {
                omega[(i, j)].clone()
            }
        });
        SubstitutionStress { omega, det_reduced }
    }

    pub fn k(&self) -> usize {
        self.omega.rows()
    }

    /// Weight between 0-based boundary labels `i` and `j`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.omega[(i, j)]
    }

    pub fn weights(&self) -> &RationalMatrix {
        &self.omega
    }

    pub fn det_reduced(&self) -> &Rational {
        &self.det_reduced
    }

    /// The Schur complement `L~` rebuilt from the weights (zero row sums).
    pub fn schur(&self) -> RationalMatrix {
        let k = self.k();
        RationalMatrix::from_fn(k, k, |i, j| {
            if i == j {
                (0..k).fold(Rational::zero(), |acc, t| acc + &self.omega[(i, t)])
            } else {
                -self.omega[(i, j)].clone()
            }
        })
    }

    /// Weights under a relabeling: new label `i` is old label `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> SubstitutionStress {
        let k = self.k();
        assert_eq!(perm.len(), k);
        SubstitutionStress {
            omega: RationalMatrix::from_fn(k, k, |i, j| self.omega[(perm[i], perm[j])].clone()),
            det_reduced: self.det_reduced.clone(),
        }
    }
}

/// Computes the substitution stresses as the off-diagonal entries of
/// `L_BI * Lbar^-1 * L_IB - L_BB`, using one exact multi-column solve.
pub fn substitution_stresses(blocks: &LaplacianBlocks) -> Result<SubstitutionStress, EquilibriumError> {
    let k = blocks.k;
    let schur = if blocks.ii.rows() == 0 {
        blocks.bb.clone()
    } else {
        let x = solve_exact(&blocks.ii, &blocks.ib).map_err(EquilibriumError::SingularReducedLaplacian)?;
        let coupling = blocks.bi.mul(&x).expect("block shapes agree");
        blocks.bb.sub(&coupling).expect("block shapes agree")
    };
    if !schur.is_symmetric() {
        return Err(EquilibriumError::SchurNotLaplacian("not symmetric".into()));
    }
    if let Some(i) = schur.row_sums().iter().position(|s| !s.is_zero()) {
        return Err(EquilibriumError::SchurNotLaplacian(format!(
            "row {i} does not sum to zero"
        )));
    }
    let omega = RationalMatrix::from_fn(k, k, |i, j| {
        if i == j {
            Rational::zero()
        } else {
            -schur[(i, j)].clone()
        }
    });
    Ok(SubstitutionStress {
        omega,
        det_reduced: blocks.det_reduced.clone(),
    })
}

/// Plane coordinates for every vertex, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneEmbedding {
    pub coords: Vec<Point2>,
}

impl PlaneEmbedding {
    pub fn point(&self, v: usize) -> &Point2 {
        &self.coords[v]
    }
}

/// Places the interior vertices at the weighted barycenters of their neighbors,
/// given the boundary positions in label order.
pub fn tutte_interior(blocks: &LaplacianBlocks, boundary: &[Point2]) -> Result<PlaneEmbedding, EquilibriumError> {
    let k = blocks.k;
    if boundary.len() != k {
        return Err(EquilibriumError::BoundaryArity {
            expected: k,
            got: boundary.len(),
        });
    }
    let n = blocks.order.len();
    let mut coords = vec![Point2::zero(); n];
    for (label, p) in boundary.iter().enumerate() {
        coords[blocks.order[label]] = p.clone();
    }
    if n > k {
        let xy_b = RationalMatrix::from_fn(k, 2, |i, j| {
            if j == 0 {
                boundary[i].x.clone()
            } else {
                boundary[i].y.clone()
            }
        });
        let rhs = blocks.ib.mul(&xy_b).expect("block shapes agree").neg();
        let xy_i = solve_exact(&blocks.ii, &rhs).map_err(EquilibriumError::SingularReducedLaplacian)?;
        for t in 0..n - k {
            coords[blocks.order[k + t]] = Point2::new(xy_i[(t, 0)].clone(), xy_i[(t, 1)].clone());
        }
    }
    Ok(PlaneEmbedding { coords })
}

/// Net stress-weighted force `sum_j w_ij (p_i - p_j)` at every vertex.
pub fn equilibrium_residuals(map: &PlanarMap, coords: &[Point2], stress: &StressAssignment) -> Vec<Point2> {
    let mut out = vec![Point2::zero(); map.n()];
    for &(u, v) in map.edges() {
        let w = stress.weight(u, v);
        let d = &(&coords[u] - &coords[v]) * w;
        out[u] = &out[u] + &d;
        out[v] = &out[v] - &d;
    }
    out
}

/// Unresolved forces at the boundary vertices, in label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceVector {
    pub forces: Vec<Point2>,
}

impl ForceVector {
    pub fn total(&self) -> Point2 {
        self.forces.iter().fold(Point2::zero(), |acc, f| &acc + f)
    }
}

/// Boundary forces computed directly from the embedding and the stress.
pub fn residual_forces(
    map: &PlanarMap,
    sel: &OuterFaceSelection,
    emb: &PlaneEmbedding,
    stress: &StressAssignment,
) -> ForceVector {
    let all = equilibrium_residuals(map, &emb.coords, stress);
    ForceVector {
        forces: sel.boundary.iter().map(|&v| all[v].clone()).collect(),
    }
}

/// Boundary forces predicted by the Schur complement: `L~ x_B`, `L~ y_B`.
pub fn schur_forces(sub: &SubstitutionStress, boundary: &[Point2]) -> ForceVector {
    let k = sub.k();
    let forces = (0..k)
        .map(|i| {
            (0..k).filter(|&j| j != i).fold(Point2::zero(), |acc, j| {
                &acc + &(&(&boundary[i] - &boundary[j]) * sub.get(i, j))
            })
        })
        .collect();
    ForceVector { forces }
}

/// Every face except the outer one is a strictly convex polygon with the given
/// orientation (+1 counterclockwise as listed, -1 clockwise).
pub fn interior_faces_convex(map: &PlanarMap, sel: &OuterFaceSelection, coords: &[Point2], orientation: i32) -> bool {
    (0..map.face_count()).filter(|&f| f != sel.face).all(|f| {
        let poly: Vec<&Point2> = map.face(f).iter().map(|&v| &coords[v]).collect();
        is_strictly_convex(&poly, orientation)
    })
}

/// Interior vertices lie strictly inside the convex boundary polygon, which is
/// given counterclockwise in label order.
pub fn interior_strictly_inside(sel: &OuterFaceSelection, coords: &[Point2], boundary: &[Point2]) -> bool {
    let k = boundary.len();
    sel.interior.iter().all(|&v| {
        (0..k).all(|i| crate::geometry::orient2d(&boundary[i], &boundary[(i + 1) % k], &coords[v]).is_positive())
    })
}
