use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::chain::{ChainLaw, MobiusChain};
use super::lazy::{BitStream, LazyReal};
use crate::error::{Error, Result};

/// Anything that yields continued-fraction digits `a_1, a_2, …`.
///
/// `Ok(None)` marks the end of a terminating (rational) expansion.
pub trait DigitSource {
    fn next_digit(&mut self) -> Result<Option<u64>>;
}

impl<B: BitStream> DigitSource for LazyReal<B> {
    fn next_digit(&mut self) -> Result<Option<u64>> {
        LazyReal::next_digit(self)
    }
}

impl<L: ChainLaw> DigitSource for MobiusChain<L> {
    fn next_digit(&mut self) -> Result<Option<u64>> {
        self.next_value().map(Some)
    }
}

impl<S: DigitSource + ?Sized> DigitSource for Box<S> {
    fn next_digit(&mut self) -> Result<Option<u64>> {
        (**self).next_digit()
    }
}

/// Euclidean-algorithm digits of a rational `p/q ∈ (0, 1)`.
#[derive(Clone, Debug)]
pub struct RationalDigits {
    num: BigInt,
    den: BigInt,
}

impl RationalDigits {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if !p.is_positive() || p >= q {
            return Err(Error::invalid("rational digits need 0 < p < q"));
        }
        let g = p.gcd(&q);
        Ok(Self {
            num: p / &g,
            den: q / g,
        })
    }
}

impl DigitSource for RationalDigits {
    fn next_digit(&mut self) -> Result<Option<u64>> {
        if self.num.is_zero() {
            return Ok(None);
        }
        let (m, r) = self.den.div_rem(&self.num);
        self.den = std::mem::replace(&mut self.num, r);
        m.to_u64().map(Some).ok_or(Error::DigitOverflow)
    }
}

/// A finite prefix followed by a repeating cycle, or the prefix alone when the
/// cycle is empty.
///
/// Serves as a test double for degenerate streams such as all ones.
#[derive(Clone, Debug)]
pub struct PatternDigits {
    prefix: Vec<u64>,
    cycle: Vec<u64>,
    pos: usize,
}

impl PatternDigits {
    pub fn repeating(pattern: Vec<u64>) -> Self {
        assert!(!pattern.is_empty());
        Self::build(Vec::new(), pattern)
    }

    pub fn finite(digits: Vec<u64>) -> Self {
        Self::build(digits, Vec::new())
    }

    /// A prefix followed by a constant tail.
    pub fn with_prefix(prefix: &[u64], tail: u64) -> Self {
        Self::build(prefix.to_vec(), vec![tail])
    }

    fn build(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        assert!(prefix.iter().chain(&cycle).all(|&d| d >= 1), "digits must be ≥ 1");
        Self { prefix, cycle, pos: 0 }
    }
}

impl DigitSource for PatternDigits {
    fn next_digit(&mut self) -> Result<Option<u64>> {
        let i = self.pos;
        let digit = if i < self.prefix.len() {
            self.prefix[i]
        } else if self.cycle.is_empty() {
            return Ok(None);
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        };
        self.pos += 1;
        Ok(Some(digit))
    }
}

/// Digits drawn so far together with their running sums `S_k`.
#[derive(Clone, Debug)]
pub struct DigitStream<S> {
    source: S,
    digits: Vec<u64>,
    sums: Vec<u64>,
    max_digit: u64,
    finished: bool,
}

impl<S: DigitSource> DigitStream<S> {
    pub fn new(source: S) -> Self {
        Self {
            source,
            digits: Vec::new(),
            sums: Vec::new(),
            max_digit: 0,
            finished: false,
        }
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `S_1, …, S_k` for the digits drawn so far.
    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn max_digit(&self) -> u64 {
        self.max_digit
    }

    /// True once a terminating expansion has ended.
    pub fn is_finite(&self) -> bool {
        self.finished
    }

    /// Draw one more digit; `false` if the expansion has ended.
    pub fn advance(&mut self) -> Result<bool> {
        if self.finished {
            return Ok(false);
        }
        match self.source.next_digit()? {
            Some(d) => {
                let prev = self.sums.last().copied().unwrap_or(0);
                let s = prev.checked_add(d).ok_or(Error::DigitOverflow)?;
                if s > i64::MAX as u64 {
                    return Err(Error::DigitOverflow);
                }
                self.digits.push(d);
                self.sums.push(s);
                self.max_digit = self.max_digit.max(d);
                Ok(true)
            }
            None => {
                self.finished = true;
                Ok(false)
            }
        }
    }

    /// Draw until at least `n` digits are available or the expansion ends.
    pub fn ensure(&mut self, n: usize) -> Result<usize> {
        while self.digits.len() < n && self.advance()? {}
        Ok(self.digits.len())
    }

    /// Draw until some `S_k > n` or the expansion ends.
    pub fn extend_past(&mut self, n: u64) -> Result<()> {
        while self.sums.last().is_none_or(|&s| s <= n) && self.advance()? {}
        Ok(())
    }

    /// `S_1, …, S_n`, drawing digits as needed.
    pub fn digit_sums(&mut self, n: usize) -> Result<&[u64]> {
        if self.ensure(n)? < n {
            return Err(Error::Exhausted { steps: self.len() });
        }
        Ok(&self.sums[..n])
    }

    /// `S♭_n = S_n − max_{1≤ℓ≤n} a_ℓ`.
    pub fn trimmed_sum(&mut self, n: usize) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        let s = self.digit_sums(n)?[n - 1];
        let max = self.digits[..n].iter().copied().max().unwrap_or(0);
        Ok(s - max)
    }

    /// `(a_1 ⋯ a_n)^{1/n}`, accumulated in log space.
    pub fn geometric_mean(&mut self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("geometric mean needs n ≥ 1"));
        }
        if self.ensure(n)? < n {
            return Err(Error::Exhausted { steps: self.len() });
        }
        let mut gm = GeometricMean::default();
        self.digits[..n].iter().for_each(|&a| gm.push(a));
        Ok(gm.value())
    }
}

/// Running geometric mean of positive integers.
///
/// The product is kept as mantissa × 2^exponent so powers of two stay exact.
#[derive(Clone, Copy, Debug)]
pub struct GeometricMean {
    mantissa: f64,
    exponent: i64,
    count: u64,
}

impl Default for GeometricMean {
    fn default() -> Self {
        Self { mantissa: 1.0, exponent: 0, count: 0 }
    }
}

impl GeometricMean {
    pub fn push(&mut self, a: u64) {
        let (m, e) = split_f64(self.mantissa * a as f64);
        self.mantissa = m;
        self.exponent += e;
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// NaN before the first value.
    pub fn value(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        ((self.exponent as f64 + self.mantissa.log2()) / self.count as f64).exp2()
    }
}

/// `x = m·2^e` with `m ∈ [1, 2)`, for positive normal `x`.
fn split_f64(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & ((1u64 << 52) - 1)) | (1023u64 << 52));
    (m, e)
}

/// The terminating digit sequence of `p/q`, at most `max_digits` long.
pub fn digits_of_rational(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    max_digits: usize,
) -> Result<DigitStream<RationalDigits>> {
    let mut stream = DigitStream::new(RationalDigits::new(p, q)?);
    stream.ensure(max_digits)?;
    if stream.len() < max_digits {
        // One more pull records the termination.
        stream.advance()?;
    }
    Ok(stream)
}
