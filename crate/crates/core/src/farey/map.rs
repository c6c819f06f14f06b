use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{BitSource, LazyReal};
use crate::scalar::{is_unit_interval, Scalar};

/// Farey map: `x/(1−x)` on `[0, 1/2]`, `1/x − 1` on `(1/2, 1]`.
pub fn farey_map<S: Scalar>(x: &S) -> S {
    if *x <= S::half() {
        x.clone() / (S::one() - x.clone())
    } else {
        S::one() / x.clone() - S::one()
    }
}

/// Lasota–Yorke map: `x/(1−x)` on `[0, 1/2]`, `2x − 1` on `(1/2, 1]`.
pub fn lasota_yorke_map<S: Scalar>(x: &S) -> S {
    if *x <= S::half() {
        x.clone() / (S::one() - x.clone())
    } else {
        x.clone() + x.clone() - S::one()
    }
}

/// Left inverse branch `u_0(x) = x/(1+x)`.
pub fn left_inverse<S: Scalar>(x: &S) -> S {
    x.clone() / (S::one() + x.clone())
}

/// Right inverse branch `u_1(x) = 1/(1+x)`.
pub fn right_inverse<S: Scalar>(x: &S) -> S {
    S::one() / (S::one() + x.clone())
}

/// `n`-th iterate of the left inverse branch, `u_0^n(x) = x/(1 + n x)`.
pub fn inverse_branch_power<S: Scalar>(n: u64, x: &S) -> S {
    x.clone() / (S::one() + S::from_u64(n) * x.clone())
}

/// True when `x ∈ A_1 = (1/2, 1]`.
pub fn in_a1<S: Scalar>(x: &S) -> bool {
    *x > S::half() && *x <= S::one()
}

/// The `n ≥ 1` with `x ∈ A_n = (1/(n+1), 1/n]`, or `None` for `x = 0`.
pub fn interval_index(x: &BigRational) -> Option<u64> {
    if !x.is_positive() || *x > BigRational::one() {
        return None;
    }
    // x ∈ (1/(n+1), 1/n]  ⟺  n = ⌊1/x⌋ (with x = 1/n giving n).
    (x.denom() / x.numer()).to_u64()
}

/// One Gauss step on a rational in `(0, 1]`: `(a_1(x), 1/x − a_1(x))`.
pub fn gauss_step(x: &BigRational) -> Option<(u64, BigRational)> {
    if !x.is_positive() {
        return None;
    }
    let (q, r) = x.denom().div_rem(x.numer());
    let digit = q.to_u64()?;
    Some((digit, BigRational::new(r, x.numer().clone())))
}

/// A point of `[0, 1]` carried exactly: a rational, or a lazily refined
/// Lebesgue-random real.
#[derive(Clone, Debug)]
pub enum ExactPoint {
    Rational(BigRational),
    Lazy(LazyReal<BitSource>),
}

impl ExactPoint {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(x: BigRational) -> Result<Self> {
        if !is_unit_interval(&x) {
            return Err(Error::invalid("point must lie in [0, 1]"));
        }
        Ok(ExactPoint::Rational(x))
    }

    pub fn random(master_seed: u64, stream_index: u64) -> Self {
        ExactPoint::Lazy(LazyReal::random(master_seed, stream_index))
    }

    pub fn with_refine_cap(self, cap: u32) -> Self {
        match self {
            ExactPoint::Lazy(x) => ExactPoint::Lazy(x.with_refine_cap(cap)),
            r => r,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactPoint::Rational(x) => Some(x),
            ExactPoint::Lazy(_) => None,
        }
    }

    pub fn in_a1(&mut self) -> Result<bool> {
        match self {
            ExactPoint::Rational(x) => Ok(in_a1(x)),
            ExactPoint::Lazy(x) => x.in_a1(),
        }
    }

    /// Apply the Farey map in place; returns `true` on the right branch.
    pub fn farey_step(&mut self) -> Result<bool> {
        match self {
            ExactPoint::Rational(x) => {
                let right = in_a1(x);
                *x = farey_map(x);
                Ok(right)
            }
            ExactPoint::Lazy(x) => x.farey_step(),
        }
    }

    /// Apply the Lasota–Yorke map in place; returns `true` on the doubling branch.
    pub fn ly_step(&mut self) -> Result<bool> {
        match self {
            ExactPoint::Rational(x) => {
                let right = in_a1(x);
                *x = lasota_yorke_map(x);
                Ok(right)
            }
            ExactPoint::Lazy(x) => x.ly_step(),
        }
    }

    /// Next continued-fraction digit with the point advanced by the Gauss map;
    /// `None` at the end of a rational expansion.
    pub fn gauss_step(&mut self) -> Result<Option<u64>> {
        match self {
            ExactPoint::Rational(x) => Ok(gauss_step(x).map(|(d, next)| {
                *x = next;
                d
            })),
            ExactPoint::Lazy(x) => x.next_digit(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactPoint::Rational(x) if x.is_zero())
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExactPoint::Rational(x) => Scalar::as_f64(x),
            ExactPoint::Lazy(x) => x.approx_value(),
        }
    }
}

/// Farey image of a point, leaving the argument untouched.
pub fn farey_step(x: &ExactPoint) -> Result<ExactPoint> {
    let mut y = x.clone();
    y.farey_step()?;
    Ok(y)
}
