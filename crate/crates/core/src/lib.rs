//! Shared numerics for the circlelab crates: coordinate charts and their
//! transitions, sparse bivariate polynomials, rational coordinate pairs,
//! the precision policy (f64 or extended-range binary floats), exact
//! Gaussian rationals and a counter-based sampler.

pub mod chart;
pub mod error;
pub mod exact;
pub mod extended;
pub mod poly;
pub mod precision;
pub mod rational;
pub mod rng;

pub use chart::{to_chart, Atlas, ChartId, ChartPoint, Transition, SINGULAR_MARGIN};
pub use error::CoreError;
pub use exact::GaussRat;
pub use extended::ExtC;
pub use num_complex::Complex64;
pub use poly::{Coeff, Poly1, Poly2};
pub use precision::{with_precision, Arith, BigC, BigReal, ErrorModel, PrecisionContext, Scalar, Tagged};
pub use rational::RationalPair;
pub use rng::CounterRng;

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
