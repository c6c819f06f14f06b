use num_rational::BigRational;

use crate::scalar::ratio;

/// `Γ(α)Γ(2−α)` at `α = 1`.
pub const UNIFORM_RETURN_LIMIT: f64 = 1.0;

/// `W_n = μ(⋃_{k≤n} T^{-k}A_1) = log(n + 2)`.
pub fn wandering_rate(n: u64) -> f64 {
    ((n + 2) as f64).ln()
}

/// Left endpoint of `A_1 ∩ {φ > n} = [(n+1)/(n+2), 1]` for `n ≥ 1`.
pub fn return_tail_endpoint(n: u64) -> BigRational {
    ratio(n as i64 + 1, n as i64 + 2)
}

/// `μ(A_1 ∩ {φ > n}) = log((n+2)/(n+1))`.
pub fn return_tail_measure(n: u64) -> f64 {
    (1.0 / (n as f64 + 1.0)).ln_1p()
}

/// `b_n = n / W_n`, the normalising sequence for `α = 1`.
pub fn bn_sequence(n: u64) -> f64 {
    n as f64 / wandering_rate(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::{first_return_time, ExactPoint};

    #[test]
    fn wandering_rate_examples() {
        assert!((wandering_rate(0) - 0.693147).abs() < 1e-6);
        assert!((wandering_rate(98) - 100f64.ln()).abs() < 1e-15);
        assert!((wandering_rate(1_000_000) / 1e6f64.ln() - 1.0).abs() < 0.1);
    }

    #[test]
    fn tail_measure_examples() {
        assert!((return_tail_measure(0) - 2f64.ln()).abs() < 1e-15);
        assert!((return_tail_measure(1) - 1.5f64.ln()).abs() < 1e-15);
        // n·log(1 + 1/(n+1)) = 1 − 3/(2n) + O(n^-2).
        let n = 1_000_000u64;
        let scaled = n as f64 * return_tail_measure(n);
        assert!((scaled - (1.0 - 1.5 / n as f64)).abs() < 1e-11, "{scaled}");
        assert!((scaled - 1.0).abs() < 2e-6);
    }

    #[test]
    fn tail_set_from_return_times() {
        // φ ≥ 1 everywhere, so n = 0 gives all of A_1.
        assert!(first_return_time(&ExactPoint::rational(1261, 2520).unwrap()).unwrap() > 0);
        // Scan a rational grid of A_1 and find where φ > n starts.
        let q = 2520i64;
        for n in 1..6u64 {
            let mut first = None;
            for p in (q / 2 + 1)..q {
                let x = ExactPoint::rational(p, q).unwrap();
                if first_return_time(&x).unwrap() > n {
                    first.get_or_insert(p);
                } else {
                    assert!(first.is_none(), "tail set not an interval");
                }
            }
            let endpoint = return_tail_endpoint(n);
            assert_eq!(ratio(first.unwrap(), q), endpoint, "n = {n}");
        }
    }

    #[test]
    fn bn_examples() {
        assert!((bn_sequence(2) - 2.0 / 4f64.ln()).abs() < 1e-15);
        let n = 1_000_000u64;
        assert!((bn_sequence(n) * wandering_rate(n) / n as f64 - 1.0).abs() < 1e-15);
        assert!((bn_sequence(n) / (n as f64 / (n as f64).ln()) - 1.0).abs() < 0.1);
    }
}
