//! Scaling the rational plane embedding to integer coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::equilibrium::{PlaneEmbedding, SubstitutionStress};
use crate::geometry::Point2;
use crate::placement::PlacementStrategy;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("NonIntegralFactor: {axis}-scaling factor {value} is not an integer")]
    NonIntegralFactor { axis: char, value: String },
    #[error("NonIntegralCoordinate: vertex {vertex} has {axis} = {value} after scaling")]
    NonIntegralCoordinate { vertex: usize, axis: char, value: String },
    #[error("SpanExceedsBound: {axis}-span {span} exceeds {bound}")]
    SpanExceedsBound { axis: char, span: String, bound: String },
}

/// Per-axis integer scaling factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingFactors {
    pub sx: BigInt,
    pub sy: BigInt,
    pub sx_boundary: BigInt,
    pub sy_boundary: BigInt,
    pub det: BigInt,
}

fn integral(axis: char, r: Rational) -> Result<BigInt, GridError> {
    if r.is_integer() && r.is_positive() {
        Ok(r.to_integer())
    } else {
        Err(GridError::NonIntegralFactor {
            axis,
            value: r.to_string(),
        })
    }
}

pub fn scale_factors(
    strategy: &dyn PlacementStrategy,
    w: &SubstitutionStress,
    det: &BigInt,
) -> Result<ScalingFactors, GridError> {
    let (bx, by) = strategy.boundary_scale(w, det);
    let sx_boundary = integral('x', bx)?;
    let sy_boundary = integral('y', by)?;
    Ok(ScalingFactors {
        sx: &sx_boundary * det,
        sy: &sy_boundary * det,
        sx_boundary,
        sy_boundary,
        det: det.clone(),
    })
}

pub type IntPoint = [BigInt; 2];

/// Integer plane coordinates, translated so both minima are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEmbedding {
    pub coords: Vec<IntPoint>,
    /// Coordinates before translation.
    pub raw: Vec<IntPoint>,
    pub delta_x: BigInt,
    pub delta_y: BigInt,
    pub bound_dx: BigInt,
    pub bound_dy: BigInt,
}

fn min_max(vals: impl Iterator<Item = BigInt>) -> (BigInt, BigInt) {
    let v: Vec<BigInt> = vals.collect();
    let lo = v.iter().min().cloned().unwrap_or_default();
    let hi = v.iter().max().cloned().unwrap_or_default();
    (lo, hi)
}

impl GridEmbedding {
    fn from_raw(raw: Vec<IntPoint>, bound_dx: BigInt, bound_dy: BigInt) -> Self {
        let (x_lo, x_hi) = min_max(raw.iter().map(|p| p[0].clone()));
        let (y_lo, y_hi) = min_max(raw.iter().map(|p| p[1].clone()));
        let coords = raw.iter().map(|p| [&p[0] - &x_lo, &p[1] - &y_lo]).collect();
        GridEmbedding {
            coords,
            raw,
            delta_x: x_hi - x_lo,
            delta_y: y_hi - y_lo,
            bound_dx,
            bound_dy,
        }
    }

    pub fn check_spans(&self) -> Result<(), GridError> {
        for (axis, span, bound) in [
            ('x', &self.delta_x, &self.bound_dx),
            ('y', &self.delta_y, &self.bound_dy),
        ] {
            if span > bound {
                return Err(GridError::SpanExceedsBound {
                    axis,
                    span: span.to_string(),
                    bound: bound.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn as_points(&self) -> Vec<Point2> {
        to_points(&self.coords)
    }

    pub fn raw_points(&self) -> Vec<Point2> {
        to_points(&self.raw)
    }
}

pub fn to_points(coords: &[IntPoint]) -> Vec<Point2> {
    coords
        .iter()
        .map(|p| {
            Point2::new(
                Rational::from_integer(p[0].clone()),
                Rational::from_integer(p[1].clone()),
            )
        })
        .collect()
}

/// Multiplies x by `S_x` and y by `S_y`; every product must be an integer.
pub fn apply_scaling(
    emb: &PlaneEmbedding,
    f: &ScalingFactors,
    bounds: (BigInt, BigInt),
) -> Result<GridEmbedding, GridError> {
    let sx = Rational::from_integer(f.sx.clone());
    let sy = Rational::from_integer(f.sy.clone());
    let mut raw = Vec::with_capacity(emb.coords.len());
    for (v, p) in emb.coords.iter().enumerate() {
        let x = &p.x * &sx;
        let y = &p.y * &sy;
        for (axis, val) in [('x', &x), ('y', &y)] {
            if !val.is_integer() {
                return Err(GridError::NonIntegralCoordinate {
                    vertex: v,
                    axis,
                    value: val.to_string(),
                });
            }
        }
        raw.push([x.to_integer(), y.to_integer()]);
    }
    Ok(GridEmbedding::from_raw(raw, bounds.0, bounds.1))
}

/// Integer coordinates divided by the per-axis gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGrid {
    pub gx: BigInt,
    pub gy: BigInt,
    pub grid: GridEmbedding,
}

fn gcd_of_differences(vals: &[BigInt]) -> BigInt {
    let lo = vals.iter().min().cloned().unwrap_or_default();
    let g = vals.iter().fold(BigInt::zero(), |acc, v| acc.gcd(&(v - &lo)));
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

/// Divides the coordinates by the gcd of their differences on each axis.
///
/// The untranslated embedding is divided when the gcd divides it (it always
/// contains an origin vertex, so this is the normal case), which keeps its
/// sign pattern: reduced coordinates may be negative. `grid.coords` is
/// translated as usual.
pub fn gcd_reduce(grid: &GridEmbedding) -> ReducedGrid {
    let xs: Vec<BigInt> = grid.raw.iter().map(|p| p[0].clone()).collect();
    let ys: Vec<BigInt> = grid.raw.iter().map(|p| p[1].clone()).collect();
    let gx = gcd_of_differences(&xs);
    let gy = gcd_of_differences(&ys);
    let divides = |g: &BigInt, axis: usize| grid.raw.iter().all(|p| p[axis].is_multiple_of(g));
    let source = if divides(&gx, 0) && divides(&gy, 1) {
        &grid.raw
    } else {
        &grid.coords
    };
    let raw: Vec<IntPoint> = source.iter().map(|p| [&p[0] / &gx, &p[1] / &gy]).collect();
    let reduced = GridEmbedding::from_raw(raw, grid.bound_dx.clone(), grid.bound_dy.clone());
    ReducedGrid { gx, gy, grid: reduced }
}
