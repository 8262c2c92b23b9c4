use num_bigint::BigInt;
use num_traits::Signed;

use super::type4::decimal;
use super::{big, int, pow, CaseType, CoordinateBounds, PlacementStrategy, W};
use crate::equilibrium::SubstitutionStress;
use crate::geometry::Point2;
use crate::Rational;

/// Outer pentagon on the unit square with a fifth vertex left of it.
pub struct PentagonSquarePlacement;

/// The ordering conditions every pentagon placement assumes.
pub(crate) fn normalized(w: &W) -> bool {
    w.at(3, 5) >= w.at(2, 4) && w.at(2, 5) >= w.at(1, 3)
}

/// Positive exactly in the square-placement case.
pub(crate) fn discriminant(w: &W) -> Rational {
    let (w13, w14, w24, w25, w35) = (w.at(1, 3), w.at(1, 4), w.at(2, 4), w.at(2, 5), w.at(3, 5));
    &w35 * &w14 + &w14 * &w25 + &w25 * &w24 + &w13 * &w35 - &w35 * &w25
}

fn p5(w: &W) -> (Rational, Rational) {
    let (w13, w24, w25, w35) = (w.at(1, 3), w.at(2, 4), w.at(2, 5), w.at(3, 5));
    let x = (&w13 - &w25 - &w24) * (&w35 + &w13 - &w24) / discriminant(w);
    let y = (&w35 + &w13 - &w24) / (&w35 + &w25);
    (x, y)
}

pub(crate) fn pentagon_theorem_bounds(n: usize) -> CoordinateBounds {
    let n_r = int(n as i64);
    CoordinateBounds {
        x: int(16) * pow(&n_r, 2) * pow(&decimal("23.083"), n),
        y: int(2) * &n_r * pow(&decimal("8.107"), n),
        z: int(16) * pow(&n_r, 4) * pow(&decimal("187.128"), n),
    }
}

impl PlacementStrategy for PentagonSquarePlacement {
    fn name(&self) -> &'static str {
        "type5a"
    }

    fn case_type(&self) -> CaseType {
        CaseType::Type5A
    }

    fn face_size(&self) -> usize {
        5
    }

    fn admits(&self, w: &SubstitutionStress) -> bool {
        let w = W(w);
        normalized(&w) && discriminant(&w).is_positive()
    }

    fn positions(&self, w: &SubstitutionStress) -> Vec<Point2> {
        let (x5, y5) = p5(&W(w));
        vec![
            Point2::from_ints(0, 0),
            Point2::from_ints(1, 0),
            Point2::from_ints(1, 1),
            Point2::from_ints(0, 1),
            Point2::new(x5, y5),
        ]
    }

    fn derived(&self, w: &SubstitutionStress) -> Vec<(&'static str, Rational)> {
        let (x5, y5) = p5(&W(w));
        vec![("x5", x5), ("y5", y5)]
    }

    fn boundary_stresses(&self, w: &SubstitutionStress) -> Vec<Rational> {
        let w = W(w);
        let (w13, w14, w24, w25, w35) = (w.at(1, 3), w.at(1, 4), w.at(2, 4), w.at(2, 5), w.at(3, 5));
        let neg_d = -discriminant(&w);
        let s12 = (&w13 * (&w25 * &w25 + &w24 * &w35 + int(2) * &w24 * &w25 - &w13 * &w25)
            + &w14 * (&w25 * &w25 + &w25 * &w35 + &w24 * &w25 + &w35 * &w24))
            / &neg_d;
        let s23 = (&w13 * &w25 + &w25 * &w35 + &w24 * &w35) / (-&w25 - &w35);
        let s34 = (&w14 * (&w35 * &w35 + &w35 * &w13 + &w25 * &w35 + &w13 * &w25)
            + &w24 * (&w35 * &w35 + &w13 * &w25 + int(2) * &w13 * &w35 - &w35 * &w24))
            / &neg_d;
        let s45 = (&w24 * &w25 + &w25 * &w14 + &w14 * &w35 + &w24 * &w35) / (&w13 - &w24 - &w25);
        let s15 = (&w13 * &w25 + &w35 * &w13 + &w14 * &w25 + &w14 * &w35) / (&w24 - &w35 - &w13);
        vec![
            s12 - w.at(1, 2),
            s23 - w.at(2, 3),
            s34 - w.at(3, 4),
            s45 - w.at(4, 5),
            s15 - w.at(1, 5),
        ]
    }

    fn boundary_scale(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        let w = W(w);
        let d = big(det);
        (discriminant(&w) * pow(&d, 2), (w.at(3, 5) + w.at(2, 5)) * d)
    }

    fn span_formula(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        let w = W(w);
        let (w13, w14, w24, w25, w35) = (w.at(1, 3), w.at(1, 4), w.at(2, 4), w.at(2, 5), w.at(3, 5));
        let d = big(det);
        let gap = &w13 - &w24;
        let dx = (&w25 * (&w13 + &w14) + &w35 * (&w14 + &w24) - &gap * &gap) * pow(&d, 3);
        let dy = (&w35 + &w25) * pow(&d, 2);
        (dx, dy)
    }

    fn span_bound(&self, n: usize, det: &BigInt) -> (BigInt, BigInt) {
        (BigInt::from(4 * n * n) * det.pow(3), BigInt::from(2 * n) * det.pow(2))
    }

    fn theorem_bounds(&self, n: usize) -> CoordinateBounds {
        pentagon_theorem_bounds(n)
    }
}
