use num_bigint::BigInt;

use super::{big, int, CaseType, CoordinateBounds, PlacementStrategy, Relabeling, W};
use crate::equilibrium::SubstitutionStress;
use crate::geometry::Point2;
use crate::Rational;

/// Outer triangle at `(0,0), (1,0), (0,1)`.
pub struct TrianglePlacement;

impl PlacementStrategy for TrianglePlacement {
    fn name(&self) -> &'static str {
        "type3"
    }

    fn case_type(&self) -> CaseType {
        CaseType::Type3
    }

    fn face_size(&self) -> usize {
        3
    }

    fn relabelings(&self) -> Vec<Relabeling> {
        vec![Relabeling::identity(3)]
    }

    fn admits(&self, _w: &SubstitutionStress) -> bool {
        true
    }

    fn positions(&self, _w: &SubstitutionStress) -> Vec<Point2> {
        vec![
            Point2::from_ints(0, 0),
            Point2::from_ints(1, 0),
            Point2::from_ints(0, 1),
        ]
    }

    fn derived(&self, _w: &SubstitutionStress) -> Vec<(&'static str, Rational)> {
        Vec::new()
    }

    fn boundary_stresses(&self, w: &SubstitutionStress) -> Vec<Rational> {
        let w = W(w);
        vec![-w.at(1, 2), -w.at(2, 3), -w.at(3, 1)]
    }

    fn boundary_scale(&self, _w: &SubstitutionStress, _det: &BigInt) -> (Rational, Rational) {
        (int(1), int(1))
    }

    fn span_formula(&self, _w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        (big(det), big(det))
    }

    fn span_bound(&self, _n: usize, det: &BigInt) -> (BigInt, BigInt) {
        (det.clone(), det.clone())
    }

    fn theorem_bounds(&self, n: usize) -> CoordinateBounds {
        let n_r = int(n as i64);
        CoordinateBounds {
            x: super::pow(&Rational::new(16.into(), 3.into()), n),
            y: super::pow(&Rational::new(16.into(), 3.into()), n),
            z: int(2) * n_r * super::pow(&Rational::new(256.into(), 9.into()), n),
        }
    }
}
