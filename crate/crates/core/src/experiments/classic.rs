use std::f64::consts::LN_2;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::runner::{run_trials, Diagnostics, RandomDigits};
use crate::error::{Error, Result};
use crate::exact::{DigitSource, DigitStream};
use crate::stats::{ks_two_sample, EmpiricalDistribution};

/// Khinchin's constant.
pub const KHINCHIN: f64 = 2.685_452_001_065_306;
/// `1/log 2`, the limit of `S♭_n/(n log n)` and of `S_n/(n log n)` in measure.
pub const INV_LN_2: f64 = 1.0 / LN_2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    pub value: f64,
    /// `|value/target − 1|`.
    pub relative_deviation: f64,
}

/// Single-orbit trajectory of a statistic against its almost-sure limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub experiment: &'static str,
    pub target: f64,
    pub checkpoints: Vec<Checkpoint>,
}

fn orbit_report<S: DigitSource>(
    experiment: &'static str,
    target: f64,
    source: S,
    checkpoints: &[u64],
    stat: impl Fn(&mut DigitStream<S>, usize) -> Result<f64>,
) -> Result<OrbitReport> {
    let mut stream = DigitStream::new(source);
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        let value = stat(&mut stream, n as usize)?;
        rows.push(Checkpoint { n, value, relative_deviation: (value / target - 1.0).abs() });
    }
    Ok(OrbitReport { experiment, target, checkpoints: rows })
}

/// Geometric mean of the first `n` digits at each checkpoint.
pub fn run_khinchin_with<S: DigitSource>(cfg: &ExperimentConfig, source: S) -> Result<OrbitReport> {
    cfg.validate()?;
    orbit_report("khinchin", KHINCHIN, source, &cfg.schedule(), |s, n| s.geometric_mean(n))
}

/// Khinchin run on the orbit of stream 0.
pub fn run_khinchin(cfg: &ExperimentConfig) -> Result<OrbitReport> {
    run_khinchin_with(cfg, RandomDigits::new(cfg, 0))
}

/// `S♭_n/(n log n)` at each checkpoint.
pub fn run_diamond_vaaler_with<S: DigitSource>(cfg: &ExperimentConfig, source: S) -> Result<OrbitReport> {
    cfg.validate()?;
    orbit_report("diamond-vaaler", INV_LN_2, source, &cfg.schedule(), |s, n| {
        Ok(s.trimmed_sum(n)? as f64 / (n as f64 * (n as f64).ln()))
    })
}

pub fn run_diamond_vaaler(cfg: &ExperimentConfig) -> Result<OrbitReport> {
    run_diamond_vaaler_with(cfg, RandomDigits::new(cfg, 0))
}

/// Law of `S_n/(n log n)` at one horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakLawSummary {
    pub n: u64,
    pub median: f64,
    /// Fraction within relative distance 0.1 of `1/log 2`.
    pub within_10pct: f64,
    /// Fraction within relative distance 0.2 of `1/log 2`.
    pub within_20pct: f64,
    /// Fraction below half or above twice `1/log 2`.
    pub outlier_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakLawReport {
    pub target: f64,
    pub trials: u64,
    pub horizons: Vec<WeakLawSummary>,
    pub diagnostics: Diagnostics,
}

fn digit_sums_at<S: DigitSource>(source: S, ks: &[u64]) -> Result<Vec<u64>> {
    let last = *ks.last().unwrap_or(&0) as usize;
    let mut stream = DigitStream::new(source);
    let sums = stream.digit_sums(last)?;
    Ok(ks.iter().map(|&k| sums[k as usize - 1]).collect())
}

pub fn run_weak_law_with<S, F>(cfg: &ExperimentConfig, source: F) -> Result<WeakLawReport>
where
    S: DigitSource,
    F: Fn(u64) -> S + Sync,
{
    cfg.validate()?;
    let ks = cfg.schedule();
    let (sums, diagnostics) = run_trials(cfg, |stream| digit_sums_at(source(stream), &ks))?;
    let horizons = ks
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let norm = n as f64 * (n as f64).ln();
            let d = EmpiricalDistribution::new(sums.iter().map(|s| s[i] as f64 / norm).collect())
                .expect("finite ratios");
            let t = INV_LN_2;
            WeakLawSummary {
                n,
                median: d.median().unwrap_or(f64::NAN),
                within_10pct: d.band_frequency(0.9 * t, 1.1 * t),
                within_20pct: d.band_frequency(0.8 * t, 1.2 * t),
                outlier_mass: d.cdf(0.5 * t).max(0.0) + d.tail_frequency(2.0 * t),
            }
        })
        .collect();
    Ok(WeakLawReport { target: INV_LN_2, trials: cfg.trials, horizons, diagnostics })
}

pub fn run_weak_law(cfg: &ExperimentConfig) -> Result<WeakLawReport> {
    run_weak_law_with(cfg, |stream| RandomDigits::new(cfg, stream))
}

/// Two-sample comparison of `S_k·log 2/k − log k` at two digit counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableReport {
    pub k1: u64,
    pub k2: u64,
    pub trials: u64,
    pub ks: f64,
    pub median_k1: f64,
    pub median_k2: f64,
    /// Empirical 99th percentile at `k2`; grows with the sample size.
    pub p99_k2: f64,
    pub diagnostics: Diagnostics,
}

/// `S_k/(k/log 2) − log k`.
pub fn centered_sum(s_k: u64, k: u64) -> f64 {
    s_k as f64 * LN_2 / k as f64 - (k as f64).ln()
}

/// The first and last horizons of the config are `k1 ≤ k2`; both samples
/// come from the same streams.
pub fn run_stable_stability_with<S, F>(cfg: &ExperimentConfig, source: F) -> Result<StableReport>
where
    S: DigitSource,
    F: Fn(u64) -> S + Sync,
{
    cfg.validate()?;
    let k1 = *cfg.horizons.first().unwrap();
    let k2 = *cfg.horizons.last().unwrap();
    if k1 > k2 {
        return Err(Error::invalid("stable check needs k1 ≤ k2"));
    }
    let ks = if k1 == k2 { vec![k1] } else { vec![k1, k2] };
    let (sums, diagnostics) = run_trials(cfg, |stream| digit_sums_at(source(stream), &ks))?;
    let a = EmpiricalDistribution::new(sums.iter().map(|s| centered_sum(s[0], k1)).collect()).expect("finite");
    let b = EmpiricalDistribution::new(sums.iter().map(|s| centered_sum(*s.last().unwrap(), k2)).collect())
        .expect("finite");
    Ok(StableReport {
        k1,
        k2,
        trials: cfg.trials,
        ks: ks_two_sample(&a, &b),
        median_k1: a.median().unwrap_or(f64::NAN),
        median_k2: b.median().unwrap_or(f64::NAN),
        p99_k2: b.quantile(0.99).unwrap_or(f64::NAN),
        diagnostics,
    })
}

pub fn run_stable_stability(cfg: &ExperimentConfig) -> Result<StableReport> {
    run_stable_stability_with(cfg, |stream| RandomDigits::new(cfg, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PatternDigits;

    fn cfg(trials: u64, horizons: Vec<u64>) -> ExperimentConfig {
        ExperimentConfig { trials, horizons, workers: 1, ..Default::default() }
    }

    #[test]
    fn khinchin_constant_streams() {
        let c = cfg(1, vec![1000, 10000]);
        let ones = run_khinchin_with(&c, PatternDigits::repeating(vec![1])).unwrap();
        assert!(ones.checkpoints.iter().all(|p| p.value == 1.0));
        let twos = run_khinchin_with(&c, PatternDigits::repeating(vec![2])).unwrap();
        assert!(twos.checkpoints.iter().all(|p| p.value == 2.0));
        assert!((ones.target - 2.685).abs() < 1e-3);
    }

    #[test]
    fn diamond_vaaler_negative_control() {
        let c = cfg(1, vec![100, 10000]);
        let r = run_diamond_vaaler_with(&c, PatternDigits::repeating(vec![1])).unwrap();
        let p = &r.checkpoints[1];
        assert!((p.value - 9999.0 / (10000.0 * 10000f64.ln())).abs() < 1e-15);
        assert!(r.checkpoints[1].value < r.checkpoints[0].value);
        assert!((r.target - 1.442695).abs() < 1e-6);
    }

    #[test]
    fn weak_law_outliers() {
        let r = run_weak_law_with(&cfg(10, vec![1000]), |_| PatternDigits::repeating(vec![1])).unwrap();
        assert_eq!(r.horizons[0].outlier_mass, 1.0);
        assert_eq!(r.horizons[0].within_20pct, 0.0);
    }

    #[test]
    fn stable_identical_horizons() {
        let r = run_stable_stability(&cfg(50, vec![300, 300])).unwrap();
        assert_eq!(r.ks, 0.0);
        let r = run_stable_stability(&cfg(50, vec![300])).unwrap();
        assert_eq!(r.ks, 0.0);
        assert!(run_stable_stability(&cfg(5, vec![500, 100])).is_err());
    }

    #[test]
    fn centered_sum_example() {
        assert!((centered_sum(1000, 100) - (10.0 * LN_2 - 100f64.ln())).abs() < 1e-12);
    }
}
