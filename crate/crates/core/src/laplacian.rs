//! Edge stresses and the block-partitioned weighted Laplacian.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{determinant_rational, RationalMatrix};
use crate::planar_map::{OuterFaceSelection, PlanarMap};
use crate::Rational;

/// A symmetric assignment of rational weights to the edges of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StressAssignment {
    weights: BTreeMap<(usize, usize), Rational>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl StressAssignment {
    /// Weight 1 on every interior edge and 0 on the edges of the outer face.
    pub fn unit_interior(map: &PlanarMap, sel: &OuterFaceSelection) -> Self {
        let weights = map
            .edges()
            .iter()
            .map(|&(u, v)| {
                let w = if sel.is_boundary_edge(u, v) {
                    Rational::zero()
                } else {
                    Rational::one()
                };
                ((u, v), w)
            })
            .collect();
        StressAssignment { weights }
    }

    pub fn from_fn(map: &PlanarMap, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        StressAssignment {
            weights: map.edges().iter().map(|&(u, v)| ((u, v), f(u, v))).collect(),
        }
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&Rational> {
        self.weights.get(&key(u, v))
    }

    /// Weight of an edge that must exist.
    pub fn weight(&self, u: usize, v: usize) -> &Rational {
        self.get(u, v)
            .unwrap_or_else(|| panic!("no stress on non-edge ({u},{v})"))
    }

    pub fn set(&mut self, u: usize, v: usize, w: Rational) {
        self.weights.insert(key(u, v), w);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.weights.iter()
    }
}

/// The weighted Laplacian in boundary-first label order, with its blocks.
#[derive(Debug, Clone)]
pub struct LaplacianBlocks {
    /// Vertex ids in label order (boundary first).
    pub order: Vec<usize>,
    pub k: usize,
    pub full: RationalMatrix,
    pub bb: RationalMatrix,
    pub bi: RationalMatrix,
    pub ib: RationalMatrix,
    /// The reduced Laplacian (interior block).
    pub ii: RationalMatrix,
    pub det_reduced: Rational,
}

impl LaplacianBlocks {
    /// The reduced determinant as an integer, when the stresses are integral.
    pub fn det_reduced_integer(&self) -> Option<BigInt> {
        self.det_reduced.is_integer().then(|| self.det_reduced.to_integer())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LaplacianError {
    #[error("SingularReducedLaplacian: det of the interior block is 0")]
    SingularReducedLaplacian,
    #[error("MissingStress: edge ({0},{1}) has no weight")]
    MissingStress(usize, usize),
}

pub fn assemble_laplacian(
    map: &PlanarMap,
    sel: &OuterFaceSelection,
    stress: &StressAssignment,
) -> Result<LaplacianBlocks, LaplacianError> {
    let n = map.n();
    let k = sel.k();
    let order = sel.order();
    let mut full = RationalMatrix::zeros(n, n);
    for &(u, v) in map.edges() {
        let w = stress.get(u, v).ok_or(LaplacianError::MissingStress(u, v))?;
        let (a, b) = (sel.position[u], sel.position[v]);
        full[(a, b)] -= w;
        full[(b, a)] -= w;
        full[(a, a)] += w;
        full[(b, b)] += w;
    }
    let boundary: Vec<usize> = (0..k).collect();
    let interior: Vec<usize> = (k..n).collect();
    let ii = full.select(&interior, &interior);
    let det_reduced = determinant_rational(&ii);
    if det_reduced.is_zero() {
        return Err(LaplacianError::SingularReducedLaplacian);
    }
    Ok(LaplacianBlocks {
        order,
        k,
        bb: full.select(&boundary, &boundary),
        bi: full.select(&boundary, &interior),
        ib: full.select(&interior, &boundary),
        ii,
        full,
        det_reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::planar_map::{choose_outer_face, validate};
    use proptest::prelude::*;

    fn unit_blocks(raw: &crate::planar_map::RawMap, face: Option<usize>) -> LaplacianBlocks {
        let map = validate(raw).unwrap();
        let sel = choose_outer_face(&map, face).unwrap();
        assemble_laplacian(&map, &sel, &StressAssignment::unit_interior(&map, &sel)).unwrap()
    }

    fn ints(m: &RationalMatrix) -> Vec<Vec<i64>> {
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.to_integer().try_into().unwrap()).collect())
            .collect()
    }

    #[test]
    fn seven_vertex_reduced_laplacian() {
        let blocks = unit_blocks(&corpus::seven_vertex(), Some(corpus::SEVEN_VERTEX_OUTER_FACE));
        assert_eq!(
            ints(&blocks.ii),
            vec![
                vec![3, -1, -1, 0],
                vec![-1, 4, 0, -1],
                vec![-1, 0, 3, -1],
                vec![0, -1, -1, 4]
            ]
        );
        assert_eq!(ints(&blocks.bb), vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(blocks.det_reduced_integer(), Some(BigInt::from(95)));
    }

    #[test]
    fn tetrahedron_reduced_laplacian() {
        let blocks = unit_blocks(&corpus::tetrahedron(), None);
        assert_eq!(ints(&blocks.ii), vec![vec![3]]);
        assert_eq!(blocks.det_reduced_integer(), Some(BigInt::from(3)));
    }

    #[test]
    fn cube_and_dodecahedron_determinants() {
        assert_eq!(
            unit_blocks(&corpus::cube(), None).det_reduced_integer(),
            Some(BigInt::from(45))
        );
        assert_eq!(
            unit_blocks(&corpus::dodecahedron(), None).det_reduced_integer(),
            Some(BigInt::from(403202))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn laplacian_structure(seed in 0u64..10_000, n in 5usize..18, num in 1i64..7, den in 1i64..5) {
            let raw = corpus::random_triangle_map(n, seed);
            let map = validate(&raw).unwrap();
            let sel = choose_outer_face(&map, None).unwrap();
            let stress = StressAssignment::from_fn(&map, |u, v| {
                Rational::new(BigInt::from(num + ((u * 7 + v) % 3) as i64), BigInt::from(den))
            });
            let blocks = assemble_laplacian(&map, &sel, &stress).unwrap();
            prop_assert!(blocks.full.row_sums().iter().all(|s| s.is_zero()));
            prop_assert!(blocks.full.is_symmetric());
            prop_assert_eq!(blocks.bi.transpose(), blocks.ib.clone());

            let unit = assemble_laplacian(&map, &sel, &StressAssignment::unit_interior(&map, &sel)).unwrap();
            let det = unit.det_reduced_integer().unwrap();
            prop_assert!(det > BigInt::zero());
        }
    }
}
