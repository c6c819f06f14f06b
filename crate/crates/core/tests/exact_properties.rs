use farey_renewal::exact::{digits_of_rational, BitSource, DigitSource, GaussChain, LazyReal, RationalDigits};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Euclid on `num/den` in (0, 1), written independently of the crate.
fn euclid_digits(mut num: BigInt, mut den: BigInt, max: usize) -> Vec<u64> {
    let mut out = Vec::new();
    while !num.is_zero() && out.len() < max {
        let (q, r) = den.div_rem(&num);
        out.push(u64::try_from(q).unwrap());
        den = num;
        num = r;
    }
    out
}

fn lazy_digits<B: farey_renewal::exact::BitStream>(x: &mut LazyReal<B>, k: usize) -> Vec<u64> {
    (0..k).map_while(|_| x.next_digit().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every real in the consumed dyadic interval shares the reported digits.
    #[test]
    fn digits_are_certified(seed in any::<u64>(), stream in 0u64..1000, k in 1usize..40) {
        let mut x = LazyReal::random(seed, stream);
        let digits = lazy_digits(&mut x, k);
        let iv = x.consumed_interval();
        let e = iv.exponent() as usize;
        let lo = BigInt::from(iv.numerator().clone());
        // Interior points lo + t·2^-e for t in {1/4, 1/2, 3/4}.
        for t in 1..4u32 {
            let num = (&lo << 2usize) + BigInt::from(t);
            let den = BigInt::one() << (e + 2);
            let (num, den) = { let g = num.gcd(&den); (num / &g, den / g) };
            let inner = euclid_digits(num, den, k);
            prop_assert_eq!(&inner, &digits);
        }
    }

    /// A larger refinement cap never changes a digit that the smaller cap decided.
    #[test]
    fn refine_cap_does_not_change_digits(seed in any::<u64>(), stream in 0u64..1000) {
        let a = lazy_digits(&mut LazyReal::random(seed, stream).with_refine_cap(128), 60);
        let b = lazy_digits(&mut LazyReal::random(seed, stream).with_refine_cap(4096), 60);
        prop_assert_eq!(a, b);
        let mut c1 = GaussChain::random(seed, stream).with_refine_cap(256);
        let mut c2 = GaussChain::random(seed, stream).with_refine_cap(4096);
        for _ in 0..300 {
            let d = c1.next_digit().unwrap().unwrap();
            prop_assert!(d >= 1);
            prop_assert_eq!(Some(d), c2.next_digit().unwrap());
        }
    }

    /// The keyed bit stream is a pure function of (seed, stream, position).
    #[test]
    fn bit_streams_are_keyed(seed in any::<u64>(), stream in any::<u64>(), split in 1u32..64) {
        let mut a = BitSource::new(seed, stream);
        let mut b = BitSource::new(seed, stream);
        let whole = a.next_bits(64);
        let hi = b.next_bits(split);
        let lo = b.next_bits(64 - split);
        prop_assert_eq!(whole, (hi << (64 - split)) | lo);
        let mut other = BitSource::new(seed, stream.wrapping_add(1));
        let mut again = BitSource::new(seed, stream);
        let w = again.next_bits(64);
        prop_assert_eq!(w, whole);
        // Distinct streams collide with probability 2^-64.
        prop_assert_ne!(other.next_bits(64), whole);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The lazy engine on an exact rational reproduces Euclid's algorithm.
    #[test]
    fn euclidean_consistency(q in 2i64..1_000_000, p_frac in 0.0f64..1.0) {
        let p = ((p_frac * (q - 1) as f64) as i64).clamp(1, q - 1);
        let expect = euclid_digits(BigInt::from(p), BigInt::from(q), usize::MAX);
        let mut x = LazyReal::rational(p, q).unwrap();
        let got = lazy_digits(&mut x, 1000);
        prop_assert_eq!(&got, &expect);
        prop_assert_eq!(x.next_digit().unwrap(), None);
        let stream = digits_of_rational(p, q, 1000).unwrap();
        prop_assert_eq!(stream.digits(), &expect[..]);
        prop_assert!(stream.is_finite());
        let mut r = RationalDigits::new(p, q).unwrap();
        let mut via_source = Vec::new();
        while let Some(d) = r.next_digit().unwrap() { via_source.push(d); }
        prop_assert_eq!(via_source, expect);
    }
}

/// Digits of a 4096-bit prefix, by plain big-integer Euclid, agree with the
/// lazy engine on the same bits: 10³ streams, 100 digits each.
#[test]
fn high_precision_oracle() {
    for stream in 0..1000u64 {
        let seed = 42 + stream % 7;
        let mut bits = BitSource::new(seed, stream);
        let mut prefix = BigUint::zero();
        for _ in 0..64 {
            prefix = (prefix << 64usize) + BigUint::from(bits.next_bits(64));
        }
        let lo = BigInt::from(prefix);
        let den = BigInt::one() << 4096usize;
        let a = euclid_digits(lo.clone(), den.clone(), 101);
        let b = euclid_digits(lo + 1, den, 101);
        // Digits shared by both ends of the prefix interval are digits of x.
        assert_eq!(a[..100], b[..100], "4096 bits did not fix 100 digits on stream {stream}");
        let lazy = lazy_digits(&mut LazyReal::random(seed, stream), 100);
        assert_eq!(lazy, a[..100], "stream {stream}");
    }
}

/// Prefix sums of 10⁴ digits match a fresh extraction summed by hand.
#[test]
fn digit_sums_recompute() {
    let mut s = farey_renewal::exact::DigitStream::new(GaussChain::random(42, 3));
    let sums = s.digit_sums(10_000).unwrap().to_vec();
    let mut again = GaussChain::random(42, 3);
    let mut total = 0u64;
    for (k, &sk) in sums.iter().enumerate() {
        total += again.next_digit().unwrap().unwrap();
        assert_eq!(total, sk);
        assert!(sk > k as u64);
    }
    let max = s.digits().iter().copied().max().unwrap();
    assert_eq!(s.trimmed_sum(10_000).unwrap(), total - max);
}
