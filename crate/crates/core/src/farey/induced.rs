use crate::error::{Error, Result};
use crate::exact::{DigitSource, DigitStream};

use super::map::ExactPoint;

/// First entry time `e(x) = min{k ≥ 0 : T^k x ∈ A_1}`, by running the orbit.
pub fn entry_time(x: &ExactPoint) -> Result<u64> {
    let mut y = x.clone();
    entry_time_in_place(&mut y)
}

fn entry_time_in_place(y: &mut ExactPoint) -> Result<u64> {
    let mut k = 0u64;
    loop {
        if y.is_zero() {
            // 0 is fixed and never enters A_1.
            return Err(Error::Exhausted { steps: k as usize });
        }
        if y.in_a1()? {
            return Ok(k);
        }
        y.farey_step()?;
        k += 1;
    }
}

/// Entry time read off the first digit: `e = a_1 − 1`.
pub fn entry_time_from_digits<S: DigitSource>(s: &mut DigitStream<S>) -> Result<u64> {
    if s.ensure(1)? == 0 {
        return Err(Error::Exhausted { steps: 0 });
    }
    Ok(s.digits()[0] - 1)
}

/// First return time `φ(x) = min{k ≥ 1 : T^k x ∈ A_1}` for `x ∈ A_1`.
pub fn first_return_time(x: &ExactPoint) -> Result<u64> {
    let mut y = x.clone();
    if !y.in_a1()? {
        return Err(Error::invalid("first return time needs x in (1/2, 1]"));
    }
    y.farey_step()?;
    Ok(1 + entry_time_in_place(&mut y)?)
}

/// Check that `T^{e(x)+1}` agrees with the Gauss step at each of `steps`
/// successive induced iterates. Rationals compare exactly; lazy points compare
/// their Möbius states after reading the same number of bits.
pub fn verify_induced_map(x: &ExactPoint, steps: usize) -> Result<bool> {
    let mut current = x.clone();
    for step in 0..steps {
        let mut via_gauss = current.clone();
        let Some(digit) = via_gauss.gauss_step()? else {
            return Err(Error::Exhausted { steps: step });
        };
        let mut via_farey = current.clone();
        let e = entry_time_in_place(&mut via_farey)?;
        via_farey.farey_step()?;
        if e + 1 != digit {
            return Ok(false);
        }
        let agree = match (&mut via_gauss, &mut via_farey) {
            (ExactPoint::Rational(g), ExactPoint::Rational(f)) => g == f,
            (ExactPoint::Lazy(g), ExactPoint::Lazy(f)) => {
                let (bg, bf) = (g.bits_consumed(), f.bits_consumed());
                if bg < bf {
                    g.absorb(bf - bg);
                } else {
                    f.absorb(bg - bf);
                }
                g.state().same_map(f.state())
            }
            _ => false,
        };
        if !agree {
            return Ok(false);
        }
        current = via_gauss;
    }
    Ok(true)
}

/// Times `k ∈ [0, n]` with `T^k x ∈ A_1`, by running the Farey orbit.
pub fn farey_orbit_hits(x: &ExactPoint, n: u64) -> Result<Vec<u64>> {
    let mut y = x.clone();
    let mut hits = Vec::new();
    for k in 0..=n {
        if y.is_zero() {
            break;
        }
        if y.farey_step()? {
            hits.push(k);
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalDigits;

    fn q(p: i64, d: i64) -> ExactPoint {
        ExactPoint::rational(p, d).unwrap()
    }

    #[test]
    fn entry_time_examples() {
        assert_eq!(entry_time(&q(3, 5)).unwrap(), 0);
        assert_eq!(entry_time(&q(1, 1)).unwrap(), 0);
        // 1/5 + 1/1000 has a_1 = 4.
        assert_eq!(entry_time(&q(201, 1000)).unwrap(), 3);
        assert!(matches!(entry_time(&q(0, 1)), Err(Error::Exhausted { .. })));
        let mut s = DigitStream::new(RationalDigits::new(201, 1000).unwrap());
        assert_eq!(entry_time_from_digits(&mut s).unwrap(), 3);
    }

    #[test]
    fn return_time_examples() {
        assert_eq!(first_return_time(&q(3, 5)).unwrap(), 1);
        assert_eq!(first_return_time(&q(9, 10)).unwrap(), 9);
        assert!(first_return_time(&q(1, 3)).is_err());
    }

    #[test]
    fn induced_map_rational_examples() {
        // 2/7 → 1/2 → 0: two induced steps, then the expansion ends.
        assert!(verify_induced_map(&q(2, 7), 2).unwrap());
        assert!(matches!(verify_induced_map(&q(2, 7), 3), Err(Error::Exhausted { steps: 2 })));
    }

    #[test]
    fn induced_map_on_lazy_points() {
        for stream in 0..20 {
            assert!(verify_induced_map(&ExactPoint::random(7, stream), 50).unwrap());
        }
    }

    #[test]
    fn orbit_hits_follow_digit_sums() {
        // 3/7 = [2, 3]: hits at S_1 − 1 = 1 and S_2 − 1 = 4.
        assert_eq!(farey_orbit_hits(&q(3, 7), 10).unwrap(), vec![1, 4]);
        let x = q(9, 10);
        assert_eq!(farey_orbit_hits(&x, 9).unwrap(), vec![0, 9]);
    }
}
