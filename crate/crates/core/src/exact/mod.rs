//! Exact continued-fraction digit extraction.
//!
//! Two engines produce certified digits from a keyed bit stream:
//! [`LazyReal`] reads the bits as the binary expansion of `x` and pushes an
//! exact Möbius state through Gauss (or Farey) steps; [`GaussChain`] draws each
//! digit from its exact conditional law and keeps a constant-size state, which
//! is what makes long Monte Carlo runs affordable. Both yield Lebesgue-random
//! digit sequences.

mod bits;
mod chain;
mod digits;
mod dyadic;
mod lazy;
mod mobius;

pub use bits::BitSource;
pub use chain::{
    ChainLaw, GaussChain, GaussLaw, LasotaYorkeChain, LasotaYorkeLaw, MobiusChain, INITIAL_BITS,
    REFINE_STEP,
};
pub use digits::{digits_of_rational, DigitSource, DigitStream, GeometricMean, PatternDigits, RationalDigits};
pub use dyadic::DyadicInterval;
pub use lazy::{BitStream, LazyReal, NoBits, QuadraticBits, DEFAULT_REFINE_CAP};
pub use mobius::{DigitProbe, MobiusState, Side};
