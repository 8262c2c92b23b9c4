//! Exact points and orientation predicates.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::Rational;

/// A point of the plane with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
    }

    pub fn zero() -> Self {
        Point2::new(Rational::zero(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Rotation by 90 degrees: `(x, y) -> (-y, x)`.
    pub fn perp(&self) -> Point2 {
        Point2::new(-self.y.clone(), self.x.clone())
    }

    pub fn dot(&self, other: &Point2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for &Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Mul<&Rational> for &Point2 {
    type Output = Point2;
    fn mul(self, s: &Rational) -> Point2 {
        self.scale(s)
    }
}

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    (b - a).cross(&(c - a))
}

/// Twice the signed area of a polygon.
pub fn signed_area2(poly: &[&Point2]) -> Rational {
    let m = poly.len();
    (0..m).fold(Rational::zero(), |acc, i| acc + poly[i].cross(poly[(i + 1) % m]))
}

/// Strict convexity with the given orientation sign (+1 counterclockwise, -1 clockwise).
pub fn is_strictly_convex(poly: &[&Point2], sign: i32) -> bool {
    let m = poly.len();
    (0..m).all(|i| {
        let o = orient2d(poly[i], poly[(i + 1) % m], poly[(i + 2) % m]);
        if sign > 0 {
            o.is_positive()
        } else {
            o.is_negative()
        }
    })
}

/// Integer point of space.
pub type Point3 = [BigInt; 3];

/// Sign of the determinant `(b - a) x (c - a) . (d - a)`.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> BigInt {
    let u: Vec<BigInt> = (0..3).map(|i| &b[i] - &a[i]).collect();
    let v: Vec<BigInt> = (0..3).map(|i| &c[i] - &a[i]).collect();
    let w: Vec<BigInt> = (0..3).map(|i| &d[i] - &a[i]).collect();
    let n = cross3(&u, &v);
    &n[0] * &w[0] + &n[1] * &w[1] + &n[2] * &w[2]
}

pub fn cross3(u: &[BigInt], v: &[BigInt]) -> [BigInt; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point2::from_ints(0, 0);
        let b = Point2::from_ints(1, 0);
        let c = Point2::from_ints(0, 1);
        assert!(orient2d(&a, &b, &c).is_positive());
        assert!(orient2d(&a, &c, &b).is_negative());
        assert!(orient2d(&a, &b, &Point2::from_ints(2, 0)).is_zero());
        assert_eq!(signed_area2(&[&a, &b, &c]), Rational::from_integer(1.into()));
        assert!(is_strictly_convex(&[&a, &b, &c], 1));
        assert!(is_strictly_convex(&[&a, &c, &b], -1));
    }

    #[test]
    fn perp_is_quarter_turn() {
        let p = Point2::from_ints(3, 5);
        assert_eq!(p.perp(), Point2::from_ints(-5, 3));
        assert!(p.dot(&p.perp()).is_zero());
    }

    #[test]
    fn orient3d_sign() {
        let pt = |x: i64, y: i64, z: i64| [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
        let o = orient3d(&pt(0, 0, 0), &pt(1, 0, 0), &pt(0, 1, 0), &pt(0, 0, 1));
        assert_eq!(o, BigInt::from(1));
    }
}
