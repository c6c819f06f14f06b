use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::bits::BitSource;
use super::mobius::{DigitProbe, MobiusState, Side};
use crate::error::{Error, Result};

/// Default number of refinement bits allowed per digit or branch decision.
pub const DEFAULT_REFINE_CAP: u32 = 512;

/// A supplier of the binary expansion of a real in `[0, 1]`.
pub trait BitStream {
    /// The next `k ≤ 64` bits, first bit most significant.
    fn next_bits(&mut self, k: u32) -> u64;
}

impl BitStream for BitSource {
    #[inline]
    fn next_bits(&mut self, k: u32) -> u64 {
        BitSource::next_bits(self, k)
    }
}

/// A stream with no bits: used for exactly known rational points.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoBits;

impl BitStream for NoBits {
    fn next_bits(&mut self, _k: u32) -> u64 {
        unreachable!("constant states never request bits")
    }
}

/// Binary expansion of the quadratic irrational `(√n − r) / s`, computed
/// exactly with integer square roots.
#[derive(Clone, Debug)]
pub struct QuadraticBits {
    n: BigUint,
    r: BigUint,
    s: BigUint,
    emitted: u64,
    buffer: Vec<u32>,
}

impl QuadraticBits {
    /// Requires `0 < (√n − r)/s < 1` and `n` not a perfect square.
    pub fn new(n: u64, r: u64, s: u64) -> Result<Self> {
        let root = BigUint::from(n).sqrt();
        if &root * &root == BigUint::from(n) {
            return Err(Error::invalid("radicand must not be a perfect square"));
        }
        if s == 0 || root < BigUint::from(r) || root >= BigUint::from(r + s) {
            return Err(Error::invalid("quadratic constant must lie in (0, 1)"));
        }
        Ok(Self {
            n: n.into(),
            r: r.into(),
            s: s.into(),
            emitted: 0,
            buffer: Vec::new(),
        })
    }

    /// `(√5 − 1)/2 = [0; 1, 1, 1, …]`.
    pub fn golden() -> Self {
        Self::new(5, 1, 2).expect("valid constant")
    }

    /// `√2 − 1 = [0; 2, 2, 2, …]`.
    pub fn silver() -> Self {
        Self::new(2, 1, 1).expect("valid constant")
    }

    /// `⌊x · 2^bits⌋`.
    fn prefix(&self, bits: u64) -> BigUint {
        let scaled = (&self.n << (2 * bits as usize)).sqrt();
        (scaled - (&self.r << bits as usize)) / &self.s
    }

    fn refill(&mut self) {
        const CHUNK: u64 = 256;
        let start = self.emitted;
        let lo = self.prefix(start);
        let hi = self.prefix(start + CHUNK);
        let fresh = hi - (lo << CHUNK as usize);
        // Pending bits are kept least significant first so pop() yields the
        // next bit of the expansion.
        let mut bits: Vec<u32> = (0..CHUNK).map(|i| fresh.bit(i) as u32).collect();
        bits.extend(self.buffer.drain(..));
        self.buffer = bits;
        self.emitted += CHUNK;
    }

    fn next_bit(&mut self) -> u32 {
        if self.buffer.is_empty() {
            self.refill();
        }
        self.buffer.pop().expect("refilled")
    }
}

impl BitStream for QuadraticBits {
    fn next_bits(&mut self, k: u32) -> u64 {
        (0..k).fold(0u64, |acc, _| (acc << 1) | self.next_bit() as u64)
    }
}

/// A real in `[0, 1]` known through its binary expansion, carried through
/// Gauss and Farey steps by an exact [`MobiusState`].
///
/// Every digit or branch it reports holds for all reals consistent with the
/// bits consumed so far.
#[derive(Clone, Debug)]
pub struct LazyReal<B = BitSource> {
    source: B,
    state: MobiusState,
    bits_consumed: u64,
    refine_cap: u32,
}

impl LazyReal<BitSource> {
    /// A Lebesgue-random real driven by the keyed bit stream.
    pub fn random(master_seed: u64, stream_index: u64) -> Self {
        Self::from_bits(BitSource::new(master_seed, stream_index))
    }

    /// The dyadic interval of consumed bits.
    pub fn consumed_interval(&self) -> super::DyadicInterval {
        self.source.prefix_interval(self.bits_consumed)
    }
}

impl LazyReal<NoBits> {
    /// The exact rational `p / q`; no refinement ever happens.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Self::rational_big(BigInt::from(p), BigInt::from(q))
    }

    pub fn rational_big(p: BigInt, q: BigInt) -> Result<Self> {
        let value = BigRational::new(p.clone(), q.clone());
        if value < BigRational::zero() || value > BigRational::from_integer(1.into()) {
            return Err(Error::invalid("rational point must lie in [0, 1]"));
        }
        Ok(Self {
            source: NoBits,
            state: MobiusState::constant(p, q)?,
            bits_consumed: 0,
            refine_cap: DEFAULT_REFINE_CAP,
        })
    }
}

impl<B: BitStream> LazyReal<B> {
    pub fn from_bits(source: B) -> Self {
        Self {
            source,
            state: MobiusState::identity(),
            bits_consumed: 0,
            refine_cap: DEFAULT_REFINE_CAP,
        }
    }

    pub fn with_refine_cap(mut self, cap: u32) -> Self {
        self.refine_cap = cap;
        self
    }

    pub fn state(&self) -> &MobiusState {
        &self.state
    }

    pub fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    pub fn refine_cap(&self) -> u32 {
        self.refine_cap
    }

    pub fn is_exact(&self) -> bool {
        self.state.is_constant()
    }

    fn absorb_one(&mut self) {
        let bit = self.source.next_bits(1);
        self.state.absorb_bits(bit, 1);
        self.bits_consumed += 1;
    }

    /// Absorb exactly `k` more bits regardless of need.
    pub fn absorb(&mut self, k: u64) {
        if self.is_exact() {
            return;
        }
        for _ in 0..k {
            self.absorb_one();
        }
    }

    /// Next continued-fraction digit, or `None` once a rational expansion ends.
    pub fn next_digit(&mut self) -> Result<Option<u64>> {
        let mut spent = 0u32;
        loop {
            match self.state.probe_digit() {
                DigitProbe::Digit(m) => {
                    let digit = m.to_u64().ok_or(Error::DigitOverflow)?;
                    self.state.gauss_step(&m);
                    return Ok(Some(digit));
                }
                DigitProbe::Terminated => return Ok(None),
                DigitProbe::Undecided => {
                    if self.is_exact() {
                        // A constant on a digit boundary cannot be refined.
                        return Err(Error::NonGenericPoint { bits: 0, what: "digit" });
                    }
                    if spent >= self.refine_cap {
                        return Err(Error::NonGenericPoint { bits: spent, what: "digit" });
                    }
                    self.absorb_one();
                    spent += 1;
                }
            }
        }
    }

    /// Refine until the whole image lies on one side of `p/q`.
    pub fn side_of(&mut self, p: i64, q: i64) -> Result<Side> {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let mut spent = 0u32;
        loop {
            match self.state.side_of(&p, &q) {
                Side::Undecided => {
                    if self.is_exact() || spent >= self.refine_cap {
                        return Err(Error::NonGenericPoint { bits: spent, what: "branch" });
                    }
                    self.absorb_one();
                    spent += 1;
                }
                side => return Ok(side),
            }
        }
    }

    /// True when the point lies in `A_1 = (1/2, 1]`.
    pub fn in_a1(&mut self) -> Result<bool> {
        let mut spent = 0u32;
        loop {
            match self.state.side_of_half() {
                Side::Undecided => {
                    if self.is_exact() || spent >= self.refine_cap {
                        return Err(Error::NonGenericPoint { bits: spent, what: "branch" });
                    }
                    self.absorb_one();
                    spent += 1;
                }
                side => return Ok(side == Side::Above),
            }
        }
    }

    /// One step of the Farey map; returns `true` if the right branch was used.
    pub fn farey_step(&mut self) -> Result<bool> {
        let right = self.in_a1()?;
        if right {
            self.state.farey_right();
        } else {
            self.state.farey_left();
        }
        Ok(right)
    }

    /// One step of the Lasota–Yorke map; returns `true` on the doubling branch.
    pub fn ly_step(&mut self) -> Result<bool> {
        let right = self.in_a1()?;
        if right {
            self.state.doubling_right();
        } else {
            self.state.farey_left();
        }
        Ok(right)
    }

    /// Current image interval of the unread tail.
    pub fn image_interval(&self) -> (BigRational, BigRational) {
        self.state.image_interval()
    }

    pub fn approx_value(&self) -> f64 {
        self.state.approx_value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_digits<B: BitStream>(x: &mut LazyReal<B>, k: usize) -> Vec<u64> {
        (0..k).map(|_| x.next_digit().unwrap().unwrap()).collect()
    }

    #[test]
    fn golden_and_silver_constants() {
        let mut g = LazyReal::from_bits(QuadraticBits::golden());
        assert_eq!(first_digits(&mut g, 30), vec![1; 30]);
        let mut s = LazyReal::from_bits(QuadraticBits::silver());
        assert_eq!(first_digits(&mut s, 30), vec![2; 30]);
    }

    #[test]
    fn quadratic_bits_match_float() {
        let mut g = QuadraticBits::golden();
        let top = g.next_bits(52) as f64 / (1u64 << 52) as f64;
        assert!((top - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!(QuadraticBits::new(4, 1, 2).is_err());
        assert!(QuadraticBits::new(5, 3, 2).is_err());
    }

    #[test]
    fn rational_points_terminate() {
        let mut x = LazyReal::rational(3, 7).unwrap();
        assert_eq!(x.next_digit().unwrap(), Some(2));
        assert_eq!(x.next_digit().unwrap(), Some(3));
        assert_eq!(x.next_digit().unwrap(), None);
        assert!(LazyReal::rational(5, 3).is_err());
    }

    #[test]
    fn random_digits_are_cap_independent() {
        let mut a = LazyReal::random(5, 2);
        let mut b = LazyReal::random(5, 2).with_refine_cap(4096);
        assert_eq!(first_digits(&mut a, 200), first_digits(&mut b, 200));
        assert_eq!(a.bits_consumed(), b.bits_consumed());
    }

    #[test]
    fn tiny_cap_signals_non_generic() {
        let mut x = LazyReal::random(5, 2).with_refine_cap(0);
        assert!(matches!(x.next_digit(), Err(Error::NonGenericPoint { .. })));
    }

    #[test]
    fn branch_at_exact_half_is_left() {
        let mut x = LazyReal::rational(1, 2).unwrap();
        assert!(!x.farey_step().unwrap());
        assert_eq!(x.image_interval().0, BigRational::from_integer(1.into()));
    }

    #[test]
    fn consumed_interval_contains_image_preimage() {
        let mut x = LazyReal::random(3, 9);
        let d = first_digits(&mut x, 10);
        let iv = x.consumed_interval();
        assert_eq!(iv.exponent(), x.bits_consumed());
        // Both endpoints of the consumed interval expand with the same digits.
        let two = BigInt::from(2).pow(iv.exponent() as u32);
        let p: BigInt = iv.numerator().clone().into();
        for num in [p.clone() + 0, p + 1] {
            let mut r = LazyReal::rational_big(num, two.clone()).unwrap();
            let got: Vec<u64> = (0..10).map(|_| r.next_digit().unwrap().unwrap()).collect();
            assert_eq!(got, d);
        }
    }
}
