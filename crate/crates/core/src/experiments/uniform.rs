use serde::Serialize;

use super::config::{Engine, ExperimentConfig};
use super::runner::{run_trials, Diagnostics, RandomDigits};
use crate::error::Result;
use crate::exact::{DigitSource, LasotaYorkeChain};
use crate::farey::{log_scaled, ly_spent_time, scan_fluctuations, scan_spent_times, ExactPoint, FluctuationRecord};
use crate::stats::{frequency_stderr, uniform_cdf, EmpiricalDistribution};

/// Per-trial fluctuation records for every horizon of the schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformLawRun {
    pub horizons: Vec<u64>,
    /// `records[trial][i]` belongs to `horizons[i]`.
    pub records: Vec<Vec<FluctuationRecord>>,
    pub diagnostics: Diagnostics,
}

/// Distributional summary of the scaled gaps at one horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformLawSummary {
    pub n: u64,
    pub trials: u64,
    /// KS distance of `log(max(n − X_n, 1))/log n` to `U[0, 1]`.
    pub ks: f64,
    /// Fraction of trials with `X_n = n`.
    pub atom_frequency: f64,
    pub zero_gap: u64,
    pub positive_gap: u64,
}

/// `ν((n − X_n)/n > ε)` against `−log ε / log n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub epsilon: f64,
    pub n: u64,
    pub frequency: f64,
    pub theoretical: f64,
    pub ratio: f64,
    pub stderr: f64,
}

impl TailReport {
    pub fn new(epsilon: f64, n: u64, frequency: f64, trials: usize) -> Self {
        let theoretical = -epsilon.ln() / (n as f64).ln();
        Self {
            epsilon,
            n,
            frequency,
            theoretical,
            ratio: frequency / theoretical,
            stderr: frequency_stderr(frequency, trials),
        }
    }
}

impl UniformLawRun {
    fn column(&self, i: usize) -> impl Iterator<Item = &FluctuationRecord> {
        self.records.iter().map(move |r| &r[i])
    }

    fn index_of(&self, n: u64) -> Option<usize> {
        self.horizons.iter().position(|&h| h == n)
    }

    /// Empirical law of the scaled gaps at horizon `n`.
    pub fn distribution(&self, n: u64) -> Option<EmpiricalDistribution> {
        let i = self.index_of(n)?;
        EmpiricalDistribution::new(self.column(i).map(|r| r.scaled).collect()).ok()
    }

    pub fn summaries(&self) -> Vec<UniformLawSummary> {
        self.horizons
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let dist = EmpiricalDistribution::new(self.column(i).map(|r| r.scaled).collect())
                    .expect("scaled gaps are finite");
                let zero_gap = self.column(i).filter(|r| r.gap == 0).count() as u64;
                let trials = self.records.len() as u64;
                UniformLawSummary {
                    n,
                    trials,
                    ks: dist.ks_statistic(uniform_cdf),
                    atom_frequency: zero_gap as f64 / trials.max(1) as f64,
                    zero_gap,
                    positive_gap: trials - zero_gap,
                }
            })
            .collect()
    }

    /// Tail reports for every `(ε, n)` pair, ε in the given order.
    pub fn tail_reports(&self, epsilons: &[f64]) -> Vec<TailReport> {
        let mut out = Vec::new();
        for (i, &n) in self.horizons.iter().enumerate() {
            let fractions: Vec<f64> = self.column(i).map(|r| r.gap as f64 / n as f64).collect();
            for &eps in epsilons {
                let hits = fractions.iter().filter(|&&f| f > eps).count();
                let freq = hits as f64 / fractions.len().max(1) as f64;
                out.push(TailReport::new(eps, n, freq, fractions.len()));
            }
        }
        out
    }
}

/// Fluctuation records at every horizon, with digits from `source(stream)`.
pub fn run_uniform_law_with<S, F>(cfg: &ExperimentConfig, source: F) -> Result<UniformLawRun>
where
    S: DigitSource,
    F: Fn(u64) -> S + Sync,
{
    cfg.validate()?;
    let horizons = cfg.schedule();
    let (records, diagnostics) = run_trials(cfg, |stream| scan_fluctuations(&mut source(stream), &horizons))?;
    Ok(UniformLawRun { horizons, records, diagnostics })
}

/// Fluctuation records for Lebesgue-random reals.
pub fn run_uniform_law(cfg: &ExperimentConfig) -> Result<UniformLawRun> {
    run_uniform_law_with(cfg, |stream| RandomDigits::new(cfg, stream))
}

/// Tail frequencies of `(n − X_n)/n` for each `ε` of the config.
pub fn run_large_deviation(cfg: &ExperimentConfig) -> Result<Vec<TailReport>> {
    Ok(run_uniform_law(cfg)?.tail_reports(&cfg.epsilons))
}

/// Spent times of the Lasota–Yorke map for `A = (1/2, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpentTimeRun {
    pub horizons: Vec<u64>,
    /// `spent[trial][i]` is `σ_n` for `horizons[i]`.
    pub spent: Vec<Vec<u64>>,
    pub diagnostics: Diagnostics,
}

impl SpentTimeRun {
    pub fn distribution(&self, n: u64) -> Option<EmpiricalDistribution> {
        let i = self.horizons.iter().position(|&h| h == n)?;
        EmpiricalDistribution::new(self.spent.iter().map(|s| log_scaled(s[i], n)).collect()).ok()
    }

    /// `(n, KS distance of log(max(σ_n, 1))/log n to U[0, 1])`.
    pub fn ks_by_horizon(&self) -> Vec<(u64, f64)> {
        self.horizons
            .iter()
            .map(|&n| (n, self.distribution(n).expect("finite").ks_statistic(uniform_cdf)))
            .collect()
    }
}

/// Lasota–Yorke spent times, with visit times from `source(stream)` read as
/// partial sums `S_k` (visits at `S_k − 1`).
pub fn run_ly_uniform_law_with<S, F>(cfg: &ExperimentConfig, source: F) -> Result<SpentTimeRun>
where
    S: DigitSource,
    F: Fn(u64) -> S + Sync,
{
    cfg.validate()?;
    let horizons = cfg.schedule();
    let (spent, diagnostics) = run_trials(cfg, |stream| scan_spent_times(&mut source(stream), &horizons))?;
    Ok(SpentTimeRun { horizons, spent, diagnostics })
}

/// Lasota–Yorke spent times for Lebesgue-random starting points. The chain
/// engine samples the induced return process; the Möbius engine runs the
/// exact orbit step by step.
pub fn run_ly_uniform_law(cfg: &ExperimentConfig) -> Result<SpentTimeRun> {
    match cfg.engine {
        Engine::Chain => run_ly_uniform_law_with(cfg, |stream| {
            LasotaYorkeChain::random(cfg.master_seed, stream).with_refine_cap(cfg.refine_cap)
        }),
        Engine::Mobius => {
            cfg.validate()?;
            let horizons = cfg.schedule();
            let (spent, diagnostics) = run_trials(cfg, |stream| {
                let x = ExactPoint::random(cfg.master_seed, stream).with_refine_cap(cfg.refine_cap);
                horizons.iter().map(|&n| Ok(ly_spent_time(&x, n)?.spent_time)).collect()
            })?;
            Ok(SpentTimeRun { horizons, spent, diagnostics })
        }
    }
}
