use num_bigint::BigInt;
use num_traits::Signed;

use super::{big, int, pow, CaseType, CoordinateBounds, PlacementStrategy, Relabeling, W};
use crate::equilibrium::SubstitutionStress;
use crate::geometry::Point2;
use crate::Rational;

/// Outer quadrilateral at `(0,0), (1,0), (2,y3), (0,1)`.
pub struct QuadPlacement;

fn y3(w: &W) -> Rational {
    w.at(2, 4) / (int(2) * w.at(1, 3) - w.at(2, 4))
}

pub(crate) fn decimal(s: &str) -> Rational {
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let num: BigInt = format!("{whole}{frac}").parse().expect("decimal literal");
    Rational::new(num, den)
}

impl PlacementStrategy for QuadPlacement {
    fn name(&self) -> &'static str {
        "type4"
    }

    fn case_type(&self) -> CaseType {
        CaseType::Type4
    }

    fn face_size(&self) -> usize {
        4
    }

    fn relabelings(&self) -> Vec<Relabeling> {
        Relabeling::cyclic(4)
    }

    fn admits(&self, w: &SubstitutionStress) -> bool {
        let w = W(w);
        w.at(1, 3) >= w.at(2, 4) && w.at(2, 4).is_positive()
    }

    fn positions(&self, w: &SubstitutionStress) -> Vec<Point2> {
        vec![
            Point2::from_ints(0, 0),
            Point2::from_ints(1, 0),
            Point2::new(int(2), y3(&W(w))),
            Point2::from_ints(0, 1),
        ]
    }

    fn derived(&self, w: &SubstitutionStress) -> Vec<(&'static str, Rational)> {
        vec![("y3", y3(&W(w)))]
    }

    fn boundary_stresses(&self, w: &SubstitutionStress) -> Vec<Rational> {
        let w = W(w);
        let (w13, w24) = (w.at(1, 3), w.at(2, 4));
        vec![
            int(-2) * &w13 - w.at(1, 2),
            &w24 - int(2) * &w13 - w.at(2, 3),
            -&w24 / int(2) - w.at(3, 4),
            &w24 * &w13 / (&w24 - int(2) * &w13) - w.at(1, 4),
        ]
    }

    fn boundary_scale(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        let w = W(w);
        (int(1), (int(2) * w.at(1, 3) - w.at(2, 4)) * big(det))
    }

    fn span_formula(&self, w: &SubstitutionStress, det: &BigInt) -> (Rational, Rational) {
        let w = W(w);
        let d = big(det);
        (int(2) * &d, (int(2) * w.at(1, 3) - w.at(2, 4)) * pow(&d, 2))
    }

    fn span_bound(&self, n: usize, det: &BigInt) -> (BigInt, BigInt) {
        (BigInt::from(2) * det, BigInt::from(2 * n) * det * det)
    }

    fn theorem_bounds(&self, n: usize) -> CoordinateBounds {
        let n_r = int(n as i64);
        CoordinateBounds {
            x: int(2) * pow(&decimal("3.530"), n),
            y: int(2) * &n_r * pow(&decimal("12.461"), n),
            z: int(8) * &n_r * &n_r * pow(&decimal("43.987"), n),
        }
    }
}
