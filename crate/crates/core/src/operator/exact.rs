use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::density::Density;

/// Largest iterate the branch-sum oracle accepts (cost `2^n`).
pub const MAX_EXACT_ITERATE: u32 = 24;

/// `T̂f(x) = [f(x/(1+x)) + x·f(1/(1+x))] / (1+x)` at a single point.
pub fn transfer_at<S: Scalar, D: Density<S>>(f: &D, x: &S) -> S {
    let w = S::one() / (S::one() + x.clone());
    (f.eval(&(x.clone() * w.clone())) + x.clone() * f.eval(&w)) * w
}

/// `P̂g(x) = [g(x/(1+x)) + g(1/(1+x))] / (1+x)^2` at a single point.
pub fn pf_at<S: Scalar, D: Density<S>>(g: &D, x: &S) -> S {
    let w = S::one() / (S::one() + x.clone());
    (g.eval(&(x.clone() * w.clone())) + g.eval(&w)) * w.clone() * w
}

/// `T̂ⁿf(x)` as the sum over all `2ⁿ` inverse-branch words.
pub fn exact_iterate<S: Scalar, D: Density<S>>(f: &D, n: u32, x: &S) -> Result<S> {
    if n > MAX_EXACT_ITERATE {
        return Err(Error::invalid(format!("exact iterate limited to n ≤ {MAX_EXACT_ITERATE}")));
    }
    Ok(branch_sum(f, n, x))
}

fn branch_sum<S: Scalar, D: Density<S>>(f: &D, n: u32, x: &S) -> S {
    if n == 0 {
        return f.eval(x);
    }
    let w = S::one() / (S::one() + x.clone());
    let left = branch_sum(f, n - 1, &(x.clone() * w.clone()));
    let right = branch_sum(f, n - 1, &w);
    (left + x.clone() * right) * w
}

/// `max |T̂f − (1/h)·P̂(h·f)|` over the sample points, with `h(x) = 1/x`.
pub fn conjugation_check<S: Scalar, D: Density<S>>(f: &D, samples: &[S]) -> Result<S> {
    let mut worst = S::zero();
    for x in samples {
        if *x <= S::zero() || *x >= S::one() {
            return Err(Error::invalid("conjugation samples must lie in (0, 1)"));
        }
        let hf = Weighted(f);
        let rhs = x.clone() * pf_at(&hf, x);
        let err = (transfer_at(f, x) - rhs).abs();
        if err > worst {
            worst = err;
        }
    }
    Ok(worst)
}

/// `y ↦ f(y)/y`.
struct Weighted<'a, D>(&'a D);

impl<S: Scalar, D: Density<S>> Density<S> for Weighted<'_, D> {
    fn eval(&self, y: &S) -> S {
        self.0.eval(y) / y.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ClosedFormDensity;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    #[test]
    fn exact_rational_iterates() {
        let id = ClosedFormDensity::<BigRational>::Identity;
        let one = ratio(1, 1);
        assert_eq!(exact_iterate(&id, 0, &ratio(2, 5)).unwrap(), ratio(2, 5));
        assert_eq!(exact_iterate(&id, 1, &one).unwrap(), ratio(1, 2));
        // T̂(id) = 2x/(1+x)^2, so T̂²(id)(1) = [g(1/2) + g(1/2)]/2 with g(1/2) = 4/9.
        assert_eq!(exact_iterate(&id, 2, &one).unwrap(), ratio(4, 9));
        let c = ClosedFormDensity::<BigRational>::One;
        assert_eq!(exact_iterate(&c, 6, &ratio(3, 7)).unwrap(), one);
        assert!(exact_iterate(&id, 25, &one).is_err());
    }

    #[test]
    fn float_matches_rational() {
        let idq = ClosedFormDensity::<BigRational>::Identity;
        let idf = ClosedFormDensity::<f64>::Identity;
        for n in 0..8 {
            let q = exact_iterate(&idq, n, &ratio(3, 4)).unwrap();
            let f = exact_iterate(&idf, n, &0.75).unwrap();
            assert!((Scalar::as_f64(&q) - f).abs() < 1e-14);
        }
    }

    #[test]
    fn pf_examples() {
        let one = ClosedFormDensity::<BigRational>::One;
        let id = ClosedFormDensity::<BigRational>::Identity;
        let x = ratio(1, 3);
        assert_eq!(pf_at(&one, &x), ratio(9, 8));
        assert_eq!(pf_at(&id, &x), ratio(9, 16));
    }

    #[test]
    fn conjugation_examples() {
        let pts: Vec<f64> = (1..=100).map(|i| i as f64 / 101.0).collect();
        for f in [ClosedFormDensity::One, ClosedFormDensity::Identity] {
            assert!(conjugation_check(&f, &pts).unwrap() <= 1e-12);
        }
        let p = ClosedFormDensity::<f64>::power(0.5).unwrap();
        assert!(conjugation_check(&p, &pts).unwrap() <= 1e-10);
        let q: Vec<BigRational> = (1..10).map(|i| ratio(i, 10)).collect();
        let err = conjugation_check(&ClosedFormDensity::<BigRational>::Identity, &q).unwrap();
        assert_eq!(err, ratio(0, 1));
        assert!(conjugation_check(&ClosedFormDensity::<f64>::One, &[0.0]).is_err());
    }
}
