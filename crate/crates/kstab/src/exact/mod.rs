//! Exact rationals, bivariate polynomials, affine forms and convex polygons.

mod affine;
mod integrate;
mod poly;
mod polygon;
mod rational;

pub use affine::AffineForm;
pub use integrate::{integrate_interval, integrate_polygon, integrate_triangle};
pub use poly::{Polynomial2, DEGREE_WARNING};
pub use polygon::{Point, Polygon};
pub use rational::{format_decimal, format_rational, int, parse_rational, rat, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("not univariate: polynomial contains v-terms")]
    NotUnivariate,
    #[error("polygon is not convex")]
    NonConvex,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
}
