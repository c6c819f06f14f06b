//! Scalar abstraction shared by the exact (rational) and floating point paths.
//!
//! Map evaluations and closed-form transfer-operator iterates are written once
//! against [`Scalar`] and instantiated for `f32`, `f64` and [`BigRational`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug {
    /// The value `num / den`; exact for rational scalars.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_u64(v: u64) -> Self;

    fn as_f64(&self) -> f64;

    /// Nearest representable value; exact for rational scalars.
    fn from_f64(v: f64) -> Self;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_u64(v: u64) -> Self {
        v as f32
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(BigRational::zero)
    }
}

/// `p / q` as a rational, panicking on a zero denominator.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::from_ratio(p, q)
}

pub(crate) fn is_unit_interval<S: Scalar>(x: &S) -> bool {
    *x >= S::zero() && *x <= S::one()
}
