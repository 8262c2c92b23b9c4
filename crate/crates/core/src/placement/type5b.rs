use num_bigint::BigInt;
use num_traits::Signed;

use super::type5a::{discriminant, normalized, pentagon_theorem_bounds};
use super::{big, int, pow, CaseType, CoordinateBounds, PlacementStrategy, W};
use crate::equilibrium::SubstitutionStress;
use crate::geometry::Point2;
use crate::Rational;

/// Outer pentagon `(0,-1), (1,y2), (1,y3), (0,1), (-1,0)`.
pub struct PentagonKitePlacement;

fn denominator(w: &W) -> Rational {
    w.at(2, 4) * w.at(3, 5) + w.at(2, 5) * w.at(1, 3) + int(2) * w.at(2, 5) * w.at(3, 5)
}

fn y2_y3(w: &W) -> (Rational, Rational) {
    let (w13, w14, w24, w25, w35) = (w.at(1, 3), w.at(1, 4), w.at(2, 4), w.at(2, 5), w.at(3, 5));
    let common = &w24 * &w13 + &w24 * &w35 + &w25 * &w13 + int(2) * &w25 * &w35;
    let den = denominator(w);
    let y2 = int(-2) * (&common - &w13 * &w13 - int(2) * &w13 * &w35 - &w35 * &w14) / &den;
    let y3 = int(2) * (&common - &w24 * &w24 - int(2) * &w24 * &w25 - &w14 * &w25) / &den;
    (y2, y3)
}

impl PlacementStrategy for PentagonKitePlacement {
    fn name(&self) -> &'static str {
        "type5b"
    }

    fn case_type(&self) -> CaseType {
        CaseType::Type5B
    }

    fn face_size(&self) -> usize {
        5
    }

    fn admits(&self, w: &SubstitutionStress) -> bool {
        let w = W(w);
        normalized(&w) && !discriminant(&w).is_positive()
    }

    fn positions(&self, w: &SubstitutionStress) -> Vec<Point2> {
        let (y2, y3) = y2_y3(&W(w));
        vec![
            Point2::from_ints(0, -1),
            Point2::new(int(1), y2),
            Point2::new(int(1), y3),
            Point2::from_ints(0, 1),
            Point2::from_ints(-1, 0),
        ]
    }

    fn derived(&self, w: &SubstitutionStress) -> Vec<(&'static str, Rational)> {
        let (y2, y3) = y2_y3(&W(w));
        vec![("y2", y2), ("y3", y3)]
    }

    fn boundary_stresses(&self, w: &SubstitutionStress) -> Vec<Rational> {
        let w = W(w);
        let (w13, w14, w24, w25, w35) = (w.at(1, 3), w.at(1, 4), w.at(2, 4), w.at(2, 5), w.at(3, 5));
        let half14 = &w14 / int(2);
        let gap = &w13 - &w24;
        let s23 = (-&w25 * (&w13 * &w13 + int(2) * &w13 * &w35 + int(2) * &w24 * &w35)
            - &w35 * (&w24 * &w24 + &w25 * &w14))
            / (int(2) * &w35 * (&w24 + &w25 - &w13 - &half14) + int(2) * &w25 * (&w13 + &w35 - &w24 - &half14)
                - &gap * &gap);
        vec![
            -&w24 - int(2) * &w25 - w.at(1, 2),
            s23 - w.at(2, 3),
            -&w13 - int(2) * &w35 - w.at(3, 4),
            &w24 - int(2) * &w35 - &w13 - w.at(4, 5),
            &w13 - int(2) * &w25 - &w24 - w.at(1, 5),
        ]
    }

    fn boundary_scale(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        (int(1), denominator(&W(w)) * pow(&big(det), 2))
    }

    fn span_formula(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        let d = big(det);
        (int(2) * &d, int(4) * denominator(&W(w)) * pow(&d, 3))
    }

    fn span_bound(&self, n: usize, det: &BigInt) -> (BigInt, BigInt) {
        (BigInt::from(2) * det, BigInt::from(16 * n * n) * det.pow(3))
    }

    /// The pentagon bounds hold for this placement with the axes exchanged.
    fn theorem_bounds(&self, n: usize) -> CoordinateBounds {
        let b = pentagon_theorem_bounds(n);
        CoordinateBounds { x: b.y, y: b.x, z: b.z }
    }
}
