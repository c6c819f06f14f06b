//! Continued-fraction digit sums seen through the Farey map.
//!
//! * [`exact`]: certified continued-fraction digits of Lebesgue-random reals.
//! * [`farey`]: Farey and Lasota–Yorke dynamics, renewal bookkeeping and the
//!   fluctuation process `X_n = max{S_k ≤ n}`.
//! * [`operator`]: the Farey transfer operator on graded grids and in closed form.
//! * [`stats`]: empirical distributions and Kolmogorov–Smirnov distances.
//! * [`experiments`]: deterministic, parallel Monte Carlo drivers.
//!
//! Map evaluations and closed-form operator iterates are generic over
//! [`Scalar`]; the aliases below fix the common instantiations.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod farey;
pub mod operator;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Double precision grid density.
pub type Grid = operator::GridFunction<f64>;
/// Single precision grid density.
pub type GridF32 = operator::GridFunction<f32>;
/// Double precision closed-form density.
pub type Density = operator::ClosedFormDensity<f64>;
