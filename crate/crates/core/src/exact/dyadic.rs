use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The closed interval `[p / 2^B, (p + 1) / 2^B]` with `0 ≤ p < 2^B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    numerator: BigUint,
    exponent: u64,
}

impl DyadicInterval {
    pub fn unit() -> Self {
        Self {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn new(numerator: BigUint, exponent: u64) -> Result<Self> {
        if numerator.bits() > exponent {
            return Err(Error::invalid("dyadic numerator must be below 2^exponent"));
        }
        Ok(Self {
            numerator,
            exponent,
        })
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Halve the interval, keeping the lower (`bit = 0`) or upper (`bit = 1`) half.
    pub fn refine(&mut self, bit: u32) {
        self.numerator <<= 1usize;
        if bit != 0 {
            self.numerator += 1u32;
        }
        self.exponent += 1;
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        if other.exponent < self.exponent {
            return false;
        }
        let shift = (other.exponent - self.exponent) as usize;
        (&other.numerator >> shift) == self.numerator
    }

    pub fn upper_numerator(&self) -> BigUint {
        &self.numerator + BigUint::one()
    }
}
