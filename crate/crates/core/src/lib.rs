//! Exact-arithmetic realization of 3-connected planar maps as convex
//! polytopes with integer vertex coordinates.

pub type Rational = num_rational::BigRational;

pub mod corpus;
pub mod equilibrium;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod laplacian;
pub mod lifting;
pub mod linalg;
pub mod pipeline;
pub mod placement;
pub mod planar_map;
pub mod verification;
