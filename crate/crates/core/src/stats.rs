//! Empirical distributions and Kolmogorov–Smirnov distances.

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite sample with CDF queries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("NaN sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `F(t) = #{v ≤ t} / m`.
    pub fn cdf(&self, t: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.count_le(t) as f64 / self.sorted.len() as f64
    }

    fn count_le(&self, t: f64) -> usize {
        self.sorted.partition_point(|&v| v <= t)
    }

    fn count_lt(&self, t: f64) -> usize {
        self.sorted.partition_point(|&v| v < t)
    }

    /// Fraction of samples strictly above `t`.
    pub fn tail_frequency(&self, t: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        1.0 - self.cdf(t)
    }

    /// Fraction of samples in the closed band `[lo, hi]`.
    pub fn band_frequency(&self, lo: f64, hi: f64) -> f64 {
        if self.sorted.is_empty() || hi < lo {
            return 0.0;
        }
        (self.count_le(hi) - self.count_lt(lo)) as f64 / self.sorted.len() as f64
    }

    /// Lower empirical quantile `inf{t : F(t) ≥ p}`.
    pub fn quantile(&self, p: f64) -> Option<f64> {
        let m = self.sorted.len();
        if m == 0 || !(0.0..=1.0).contains(&p) {
            return None;
        }
        let k = ((p * m as f64).ceil() as usize).clamp(1, m);
        Some(self.sorted[k - 1])
    }

    pub fn median(&self) -> Option<f64> {
        self.quantile(0.5)
    }

    /// One-sample KS distance to a continuous reference CDF.
    pub fn ks_statistic<F: Fn(f64) -> f64>(&self, reference: F) -> f64 {
        ks_statistic(self, reference)
    }
}

/// `sup_t |F_emp − F|`, evaluated on both sides of each sample point.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &EmpiricalDistribution, reference: F) -> f64 {
    let m = samples.len() as f64;
    let xs = samples.samples();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let t = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == t {
            j += 1;
        }
        let f = reference(t);
        let below = i as f64 / m;
        let at = j as f64 / m;
        d = d.max((below - f).abs()).max((at - f).abs());
        i = j;
    }
    d
}

/// CDF of the uniform law on `[0, 1]`.
pub fn uniform_cdf(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// Two-sample KS distance `sup_t |F_a(t) − F_b(t)|`.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (xa, xb) = (a.samples(), b.samples());
    if xa.is_empty() || xb.is_empty() {
        return if xa.len() == xb.len() { 0.0 } else { 1.0 };
    }
    let (ma, mb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() || j < xb.len() {
        let t = match (xa.get(i), xb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i] <= t {
            i += 1;
        }
        while j < xb.len() && xb[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / ma - j as f64 / mb).abs());
    }
    d
}

/// Standard error of a frequency estimate `sqrt(p(1−p)/m)`.
pub fn frequency_stderr(p: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / m as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_statistic(&dist(&[0.0; 7]), uniform_cdf), 1.0);
        assert_eq!(ks_statistic(&dist(&[0.5]), uniform_cdf), 0.5);
        let grid: Vec<f64> = (1..=100).map(|i| (i as f64 - 0.5) / 100.0).collect();
        assert!((ks_statistic(&dist(&grid), uniform_cdf) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_right_continuous() {
        let d = dist(&[0.2, 0.2, 0.7]);
        assert_eq!(d.cdf(0.1), 0.0);
        assert!((d.cdf(0.2) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.cdf(f64::INFINITY), 1.0);
        assert_eq!(d.cdf(f64::NEG_INFINITY), 0.0);
        assert!((d.tail_frequency(0.2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.median(), Some(0.2));
        assert_eq!(d.quantile(1.0), Some(0.7));
        assert!((d.band_frequency(0.2, 0.7) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_sample_examples() {
        let a = dist(&[0.1, 0.4, 0.9]);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b = dist(&[2.0, 3.0]);
        assert_eq!(ks_two_sample(&a, &b), 1.0);
        let c = dist(&[0.1, 0.5]);
        // Largest gap at 0.5: F_a = 2/3, F_c = 1.
        assert!((ks_two_sample(&a, &c) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn stderr_example() {
        assert!((frequency_stderr(0.5, 100) - 0.05).abs() < 1e-15);
    }
}
