//! Digit-by-digit samplers driven by the exact conditional law of the next
//! value given the past.
//!
//! For a Lebesgue-random `x`, conditioned on its first `k` continued-fraction
//! digits, the tail `t = G^k x` has density proportional to `(1 + θ t)^-2` on
//! `[0, 1]` with `θ = q_{k-1}/q_k`. The next digit is therefore
//! `⌊(1 + θ)/U − θ⌋` for a fresh uniform `U`, and `θ ↦ 1/(m + θ)`. The
//! induced return process of the Lasota–Yorke map on `(1/2, 1]` has the same
//! shape with `θ ↦ (m + θ − 1)/(m + θ + 1)`.
//!
//! `U` is read lazily from a [`BitSource`]. A value is emitted only when it is
//! constant over the whole dyadic interval of `U` at the exact `θ`. The fast
//! path brackets `θ` with outward-rounded `f64` interval arithmetic; when that
//! bracket cannot decide, the exact `θ` is rebuilt from the value history with
//! big integers. Either way the emitted sequence is the same function of the
//! bit stream.

use std::marker::PhantomData;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::bits::BitSource;
use crate::error::{Error, Result};

/// Bits drawn for `U` before the first decision attempt.
pub const INITIAL_BITS: u32 = 32;
/// Bits added per refinement round.
pub const REFINE_STEP: u32 = 8;
const FAST_MAX_BITS: u32 = 52;
const TWO_POW_52: f64 = 4_503_599_627_370_496.0;

/// Parameter update of a conditional-law chain.
pub trait ChainLaw: Clone + Copy + Send + Sync + Default + 'static {
    /// Integer matrix `[p, q, r, s]` of `θ ↦ (pθ + q)/(rθ + s)` after value `m`.
    fn update_matrix(m: u64) -> [BigInt; 4];

    /// Outward-rounded image of `[lo, hi]` under the update, for values in
    /// `[m_lo, m_hi]`.
    fn update_interval(lo: f64, hi: f64, m_lo: f64, m_hi: f64) -> (f64, f64);
}

/// Continued-fraction digits of a Lebesgue-random real.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussLaw;

/// Entry and return times of the Lasota–Yorke map to `(1/2, 1]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LasotaYorkeLaw;

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

impl ChainLaw for GaussLaw {
    fn update_matrix(m: u64) -> [BigInt; 4] {
        [BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(m)]
    }

    #[inline]
    fn update_interval(lo: f64, hi: f64, m_lo: f64, m_hi: f64) -> (f64, f64) {
        let new_lo = down(1.0 / up(m_hi + hi));
        let new_hi = up(1.0 / down(m_lo + lo));
        (new_lo.max(0.0), new_hi.min(1.0))
    }
}

impl ChainLaw for LasotaYorkeLaw {
    fn update_matrix(m: u64) -> [BigInt; 4] {
        let m = BigInt::from(m);
        [BigInt::one(), &m - 1, BigInt::one(), m + 1]
    }

    #[inline]
    fn update_interval(lo: f64, hi: f64, m_lo: f64, m_hi: f64) -> (f64, f64) {
        let t_lo = down(down(m_lo + lo) + 1.0);
        let t_hi = up(up(m_hi + hi) + 1.0);
        let new_lo = down(1.0 - up(2.0 / t_lo));
        let new_hi = up(1.0 - down(2.0 / t_hi));
        (new_lo.max(0.0), new_hi.min(1.0))
    }
}

enum Probe {
    Decided(u64),
    NeedBits,
    OutOfRange,
}

/// Lazily refined uniform `U ∈ [p/2^B, (p+1)/2^B]`.
enum Uniform {
    Small { p: u64, bits: u32 },
    Big { p: BigUint, bits: u32 },
}

impl Uniform {
    fn bits(&self) -> u32 {
        match self {
            Uniform::Small { bits, .. } | Uniform::Big { bits, .. } => *bits,
        }
    }

    fn refine(&mut self, source: &mut BitSource, k: u32) {
        let more = source.next_bits(k);
        match self {
            Uniform::Small { p, bits } if *bits + k <= 64 => {
                *p = (*p << k) | more;
                *bits += k;
            }
            Uniform::Small { p, bits } => {
                let big = (BigUint::from(*p) << k as usize) + more;
                *self = Uniform::Big {
                    p: big,
                    bits: *bits + k,
                };
            }
            Uniform::Big { p, bits } => {
                *p <<= k as usize;
                *p += more;
                *bits += k;
            }
        }
    }

    fn numerator(&self) -> BigUint {
        match self {
            Uniform::Small { p, .. } => BigUint::from(*p),
            Uniform::Big { p, .. } => p.clone(),
        }
    }
}

/// Sampler of the value sequence `m_1, m_2, …` of a [`ChainLaw`].
#[derive(Clone, Debug)]
pub struct MobiusChain<L: ChainLaw> {
    source: BitSource,
    theta_lo: f64,
    theta_hi: f64,
    history: Vec<u64>,
    refine_cap: u32,
    exact_fallbacks: u64,
    _law: PhantomData<L>,
}

pub type GaussChain = MobiusChain<GaussLaw>;
pub type LasotaYorkeChain = MobiusChain<LasotaYorkeLaw>;

impl<L: ChainLaw> MobiusChain<L> {
    pub fn new(source: BitSource) -> Self {
        Self {
            source,
            theta_lo: 0.0,
            theta_hi: 0.0,
            history: Vec::new(),
            refine_cap: super::lazy::DEFAULT_REFINE_CAP,
            exact_fallbacks: 0,
            _law: PhantomData,
        }
    }

    pub fn random(master_seed: u64, stream_index: u64) -> Self {
        Self::new(BitSource::new(master_seed, stream_index))
    }

    /// Caps the number of bits of `U` per value; values below the initial
    /// draw are raised to it.
    pub fn with_refine_cap(mut self, cap: u32) -> Self {
        self.refine_cap = cap.max(INITIAL_BITS);
        self
    }

    pub fn history(&self) -> &[u64] {
        &self.history
    }

    pub fn bits_consumed(&self) -> u64 {
        self.source.position()
    }

    /// Number of values that needed the big-integer path.
    pub fn exact_fallbacks(&self) -> u64 {
        self.exact_fallbacks
    }

    /// Current bracket of the law parameter `θ`.
    pub fn theta_bracket(&self) -> (f64, f64) {
        (self.theta_lo, self.theta_hi)
    }

    pub fn next_value(&mut self) -> Result<u64> {
        let mut u = Uniform::Small {
            p: self.source.next_bits(INITIAL_BITS),
            bits: INITIAL_BITS,
        };
        let m = loop {
            if let Uniform::Small { p, bits } = u {
                if bits <= FAST_MAX_BITS {
                    match self.fast_probe(p, bits) {
                        Probe::Decided(m) => break m,
                        Probe::NeedBits if bits + REFINE_STEP <= FAST_MAX_BITS => {
                            u.refine(&mut self.source, REFINE_STEP);
                            continue;
                        }
                        _ => {}
                    }
                }
            }
            if let Some(m) = self.exact_probe(&u) {
                self.exact_fallbacks += 1;
                break m;
            }
            if u.bits() + REFINE_STEP > self.refine_cap {
                return Err(Error::NonGenericPoint {
                    bits: u.bits(),
                    what: "digit",
                });
            }
            u.refine(&mut self.source, REFINE_STEP);
        };
        let (m_lo, m_hi) = if m < (1u64 << 53) {
            (m as f64, m as f64)
        } else {
            (down(m as f64), up(m as f64))
        };
        let (lo, hi) = L::update_interval(self.theta_lo, self.theta_hi, m_lo, m_hi);
        self.theta_lo = lo;
        self.theta_hi = hi;
        self.history.push(m);
        Ok(m)
    }

    /// Certified `⌊(1+θ)/U − θ⌋` from the float bracket, if it is constant.
    #[inline]
    fn fast_probe(&self, p: u64, bits: u32) -> Probe {
        if p == 0 {
            return Probe::OutOfRange;
        }
        let scale = (-(bits as i32) as f64).exp2();
        let u_lo = p as f64 * scale;
        let u_hi = (p + 1) as f64 * scale;
        let g_lo = down(down(down(1.0 + self.theta_lo) / u_hi) - self.theta_lo);
        let g_hi = up(up(up(1.0 + self.theta_hi) / u_lo) - self.theta_hi);
        if !(g_hi < TWO_POW_52) {
            return Probe::OutOfRange;
        }
        let f_lo = g_lo.floor();
        if f_lo == g_hi.floor() && f_lo >= 1.0 {
            Probe::Decided(f_lo as u64)
        } else {
            Probe::NeedBits
        }
    }

    /// Exact decision using `θ` rebuilt from the value history.
    fn exact_probe(&self, u: &Uniform) -> Option<u64> {
        let p = BigInt::from(u.numerator());
        if p.is_zero() {
            return None;
        }
        let scale = BigInt::one() << u.bits() as usize;
        let k = self.history.len();
        let mut window = k.min(16);
        loop {
            let ((lo_n, lo_d), (hi_n, hi_d)) = self.theta_window(window);
            // g is increasing in θ and decreasing in U.
            let g_min = floor_g(&lo_n, &lo_d, &(&p + 1), &scale);
            let g_max = floor_g(&hi_n, &hi_d, &p, &scale);
            if g_min == g_max {
                return g_min.to_u64().filter(|&m| m >= 1);
            }
            // If U alone straddles a boundary, more bits of U are needed
            // rather than a longer history.
            if floor_g(&lo_n, &lo_d, &(&p + 1), &scale) != floor_g(&lo_n, &lo_d, &p, &scale) {
                return None;
            }
            if window == k {
                return None;
            }
            window = (window * 2).min(k);
        }
    }

    /// Bracket of `θ_k` from the last `window` values; exact when the window
    /// covers the whole history (`θ_0 = 0`).
    fn theta_window(&self, window: usize) -> ((BigInt, BigInt), (BigInt, BigInt)) {
        let k = self.history.len();
        let mut prod = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        for &m in &self.history[k - window..] {
            let [p, q, r, s] = L::update_matrix(m);
            prod = [
                &p * &prod[0] + &q * &prod[2],
                &p * &prod[1] + &q * &prod[3],
                &r * &prod[0] + &s * &prod[2],
                &r * &prod[1] + &s * &prod[3],
            ];
        }
        let at0 = (prod[1].clone(), prod[3].clone());
        if window == k {
            return (at0.clone(), at0);
        }
        let at1 = (&prod[0] + &prod[1], &prod[2] + &prod[3]);
        // Denominators are positive on [0, 1].
        if &at0.0 * &at1.1 <= &at1.0 * &at0.1 {
            (at0, at1)
        } else {
            (at1, at0)
        }
    }
}

/// `⌊(1 + n/d)·scale/u − n/d⌋` for positive `d`, `u`.
fn floor_g(n: &BigInt, d: &BigInt, u: &BigInt, scale: &BigInt) -> BigInt {
    let num = (d + n) * scale - n * u;
    let den = d * u;
    num.div_floor(&den)
}
