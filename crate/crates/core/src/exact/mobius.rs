
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer Möbius map `y ↦ (a·y + b) / (c·y + d)` applied to the unread tail
/// `y ∈ [0, 1]` of a lazily refined real.
///
/// Invariants after [`MobiusState::normalize`]: the denominator is positive on
/// all of `[0, 1]` (`d > 0` and `c + d > 0`) and `gcd(a, b, c, d) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusState {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Where the image of `[0, 1]` lies relative to a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    /// The state is constant and equal to the threshold.
    At,
    Above,
    /// The image touches or crosses the threshold; more bits are needed.
    Undecided,
}

/// Outcome of trying to read the next continued-fraction digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitProbe {
    Digit(BigInt),
    /// The state is the constant 0: a terminating expansion has ended.
    Terminated,
    Undecided,
}

impl MobiusState {
    pub fn identity() -> Self {
        Self::from_entries(1, 0, 0, 1)
    }

    pub fn from_entries(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into()).expect("valid entries")
    }

    /// Fails when the denominator vanishes somewhere on `[0, 1]`.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let mut s = Self { a, b, c, d };
        let lo = s.d.sign();
        let hi = (&s.c + &s.d).sign();
        if lo == num_bigint::Sign::NoSign || lo != hi {
            return Err(Error::invalid("Möbius denominator changes sign on [0,1]"));
        }
        s.normalize();
        Ok(s)
    }

    /// The constant map `y ↦ p / q`.
    pub fn constant(p: BigInt, q: BigInt) -> Result<Self> {
        Self::new(BigInt::zero(), p, BigInt::zero(), q)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_constant(&self) -> bool {
        &self.a * &self.d == &self.b * &self.c
    }

    pub fn normalize(&mut self) {
        self.fix_sign();
        let g = self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d);
        if !g.is_zero() && !g.is_one() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
            self.d /= &g;
        }
    }

    fn fix_sign(&mut self) {
        if self.d.is_negative() || (self.d.is_zero() && self.c.is_negative()) {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
            self.d = -&self.d;
        }
    }

    /// Remove a common power of two. Steps with determinant `±2^j` can only
    /// introduce such factors, so this keeps the gcd at 1 without a full gcd.
    fn strip_twos(&mut self) {
        let z = [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .filter_map(|x| x.trailing_zeros())
            .min()
            .unwrap_or(0);
        if z > 0 {
            let z = z as usize;
            self.a >>= z;
            self.b >>= z;
            self.c >>= z;
            self.d >>= z;
        }
    }

    /// Compose with `y = (v + y') / 2^k`: the next `k` bits of the tail are `v`.
    pub fn absorb_bits(&mut self, value: u64, k: u32) {
        if k == 0 {
            return;
        }
        let v = BigInt::from(value);
        self.b <<= k as usize;
        self.b += &self.a * &v;
        self.d <<= k as usize;
        self.d += &self.c * &v;
        self.strip_twos();
    }

    /// Post-compose with the integer Möbius map `ξ ↦ (p·ξ + q) / (r·ξ + s)`.
    ///
    /// The caller guarantees `r·ξ + s ≠ 0` on the current image.
    pub fn post_compose(&mut self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        let a = p * &self.a + q * &self.c;
        let b = p * &self.b + q * &self.d;
        let c = r * &self.a + s * &self.c;
        let d = r * &self.b + s * &self.d;
        self.a = a;
        self.b = b;
        self.c = c;
        self.d = d;
        self.normalize();
    }

    /// Endpoint images `M(0)` and `M(1)` as exact rationals.
    pub fn image(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.b.clone(), self.d.clone()),
            BigRational::new(&self.a + &self.b, &self.c + &self.d),
        )
    }

    /// Ordered image interval `[lo, hi]` of `[0, 1]`.
    pub fn image_interval(&self) -> (BigRational, BigRational) {
        let (e0, e1) = self.image();
        if e0 <= e1 {
            (e0, e1)
        } else {
            (e1, e0)
        }
    }

    /// Position of the image relative to the threshold `p / q` (`q > 0`).
    pub fn side_of(&self, p: &BigInt, q: &BigInt) -> Side {
        // Denominators are positive, so cross-multiplication keeps signs.
        let s0 = (&self.b * q - p * &self.d).sign();
        let s1 = ((&self.a + &self.b) * q - p * (&self.c + &self.d)).sign();
        use num_bigint::Sign::*;
        match (s0, s1) {
            (Minus, Minus) => Side::Below,
            (Plus, Plus) => Side::Above,
            (NoSign, NoSign) if self.is_constant() => Side::At,
            _ => Side::Undecided,
        }
    }

    /// Side of `1/2`, the branch point of the Farey map.
    pub fn side_of_half(&self) -> Side {
        let s0 = ((&self.b << 1usize) - &self.d).sign();
        let s1 = (((&self.a + &self.b) << 1usize) - &self.c - &self.d).sign();
        use num_bigint::Sign::*;
        match (s0, s1) {
            (Minus, Minus) => Side::Below,
            (Plus, Plus) => Side::Above,
            (NoSign, NoSign) if self.is_constant() => Side::At,
            _ => Side::Undecided,
        }
    }

    /// Try to read `⌊1/ξ⌋` for every `ξ` in the closed image interval.
    pub fn probe_digit(&self) -> DigitProbe {
        if self.b.is_zero() && self.a.is_zero() {
            return DigitProbe::Terminated;
        }
        let num1 = &self.a + &self.b;
        if !self.b.is_positive() || !num1.is_positive() {
            return DigitProbe::Undecided;
        }
        let f0 = self.d.div_floor(&self.b);
        let f1 = (&self.c + &self.d).div_floor(&num1);
        if f0 == f1 && f0.is_positive() {
            DigitProbe::Digit(f0)
        } else {
            DigitProbe::Undecided
        }
    }

    /// Gauss step `ξ ↦ 1/ξ − m`.
    // The branch steps below have determinant ±1 (±2 for doubling), so the
    // gcd stays 1 up to a power of two.
    pub fn gauss_step(&mut self, m: &BigInt) {
        let a = &self.c - m * &self.a;
        let b = &self.d - m * &self.b;
        self.c = std::mem::replace(&mut self.a, a);
        self.d = std::mem::replace(&mut self.b, b);
        self.fix_sign();
    }

    /// Left Farey branch `ξ ↦ ξ / (1 − ξ)`.
    pub fn farey_left(&mut self) {
        self.c -= &self.a;
        self.d -= &self.b;
        self.fix_sign();
    }

    /// Right Farey branch `ξ ↦ 1/ξ − 1`.
    pub fn farey_right(&mut self) {
        let a = &self.c - &self.a;
        let b = &self.d - &self.b;
        self.c = std::mem::replace(&mut self.a, a);
        self.d = std::mem::replace(&mut self.b, b);
        self.fix_sign();
    }

    /// Doubling branch of the Lasota–Yorke map, `ξ ↦ 2ξ − 1`.
    pub fn doubling_right(&mut self) {
        self.a <<= 1usize;
        self.a -= &self.c;
        self.b <<= 1usize;
        self.b -= &self.d;
        self.fix_sign();
        self.strip_twos();
    }

    /// Largest bit length among the entries.
    pub fn max_bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate at a rational tail value.
    pub fn eval(&self, y: &BigRational) -> BigRational {
        let num = BigRational::from_integer(self.a.clone()) * y + BigRational::from_integer(self.b.clone());
        let den = BigRational::from_integer(self.c.clone()) * y + BigRational::from_integer(self.d.clone());
        num / den
    }

    /// Approximate midpoint of the image, for diagnostics.
    pub fn approx_value(&self) -> f64 {
        let (lo, hi) = self.image_interval();
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Equality as maps of `[0, 1]`, i.e. up to a nonzero scalar factor.
    pub fn same_map(&self, other: &MobiusState) -> bool {
        let mut x = self.clone();
        let mut y = other.clone();
        x.normalize();
        y.normalize();
        x == y
    }
}
