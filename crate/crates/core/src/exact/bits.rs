use num_bigint::BigUint;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::dyadic::DyadicInterval;

/// Deterministic stream of fair bits keyed by `(master_seed, stream_index)`.
///
/// Bits are drawn from a ChaCha8 keystream: the master seed selects the key,
/// the stream index selects the nonce, so distinct trials read independent
/// streams and a bit is a pure function of `(master_seed, stream_index, position)`.
/// Words are consumed most significant bit first.
#[derive(Clone, Debug)]
pub struct BitSource {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
    position: u64,
}

impl BitSource {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
            word: 0,
            left: 0,
            position: 0,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of bits emitted so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    #[inline]
    pub fn next_bit(&mut self) -> u32 {
        self.next_bits(1) as u32
    }

    /// The next `k` bits (`k ≤ 64`) as an integer, first bit most significant.
    #[inline]
    pub fn next_bits(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 64);
        if k == 0 {
            return 0;
        }
        self.position += k as u64;
        if k <= self.left {
            let out = if k == 64 { self.word } else { self.word >> (64 - k) };
            self.word = if k == 64 { 0 } else { self.word << k };
            self.left -= k;
            return out;
        }
        // Drain what is buffered, then refill.
        let have = self.left;
        let high = if have == 0 { 0 } else { self.word >> (64 - have) };
        let need = k - have;
        self.word = self.rng.next_u64();
        self.left = 64;
        let low = if need == 64 { self.word } else { self.word >> (64 - need) };
        self.word = if need == 64 { 0 } else { self.word << need };
        self.left -= need;
        if need == 64 {
            low
        } else {
            (high << need) | low
        }
    }

    /// The dyadic interval of all reals whose binary expansion begins with the
    /// first `bits` bits of this stream. Replays the stream from the start.
    pub fn prefix_interval(&self, bits: u64) -> DyadicInterval {
        let mut replay = BitSource::new(self.master_seed, self.stream_index);
        let mut numerator = BigUint::default();
        let mut remaining = bits;
        while remaining > 0 {
            let take = remaining.min(64) as u32;
            numerator <<= take as usize;
            numerator += replay.next_bits(take);
            remaining -= take as u64;
        }
        DyadicInterval::new(numerator, bits).expect("prefix numerator is below 2^bits")
    }
}
