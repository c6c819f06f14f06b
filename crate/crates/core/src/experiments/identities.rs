use serde::Serialize;

use super::config::ExperimentConfig;
use super::runner::{run_trials, Diagnostics};
use crate::error::{Error, Result};
use crate::exact::{DigitStream, LazyReal};
use crate::farey::{farey_orbit_hits, fluctuation, renewal_trace, verify_induced_map, ExactPoint, RenewalTrace};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedReport {
    pub points: u64,
    pub steps: usize,
    /// Streams on which the induced Farey map and the Gauss map disagreed.
    pub failures: Vec<u64>,
    pub diagnostics: Diagnostics,
}

/// Compare `T^{e+1}` with the Gauss step along `steps` induced iterates of
/// each seeded point.
pub fn run_induced_check(cfg: &ExperimentConfig, steps: usize) -> Result<InducedReport> {
    cfg.validate()?;
    let (ok, diagnostics) = run_trials(cfg, |stream| {
        let x = ExactPoint::random(cfg.master_seed, stream).with_refine_cap(cfg.refine_cap);
        Ok((stream, verify_induced_map(&x, steps)?))
    })?;
    let failures = ok.into_iter().filter(|(_, agree)| !agree).map(|(s, _)| s).collect();
    Ok(InducedReport { points: cfg.trials, steps, failures, diagnostics })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma31Summary {
    pub n: u64,
    pub streams: u64,
    /// Streams whose orbit visits `A_1` by time `n − 1`.
    pub in_k: u64,
    /// Streams where `X_n` disagrees with `1 + Z_{n−1}` (or with 0).
    pub violations: u64,
    /// Streams where the digit-built renewal trace disagrees with the orbit.
    pub trace_mismatches: u64,
}

/// `X_n` from the digits against `Z_{n−1}` from the Farey orbit of the same real.
pub fn run_lemma31_check(cfg: &ExperimentConfig) -> Result<Vec<Lemma31Summary>> {
    cfg.validate()?;
    let horizons = cfg.schedule();
    let last = *horizons.last().unwrap();
    let (rows, _) = run_trials(cfg, |stream| {
        let x = ExactPoint::random(cfg.master_seed, stream).with_refine_cap(cfg.refine_cap);
        let hits = farey_orbit_hits(&x, last - 1)?;
        let mut digits = DigitStream::new(LazyReal::random(cfg.master_seed, stream).with_refine_cap(cfg.refine_cap));
        horizons
            .iter()
            .map(|&n| {
                let from_orbit = RenewalTrace::from_hit_times(&hits, n - 1);
                let x_n = fluctuation(&mut digits, n)?.x_n;
                let expected = if from_orbit.in_k { 1 + from_orbit.last_hit } else { 0 };
                let from_digits = renewal_trace(&mut digits, n - 1)?;
                let same = from_digits.last_hit == from_orbit.last_hit
                    && from_digits.in_k == from_orbit.in_k
                    && from_digits.spent_time == from_orbit.spent_time;
                Ok((from_orbit.in_k, x_n == expected, same))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    if rows.is_empty() {
        return Err(Error::invalid("no trials"));
    }
    Ok(horizons
        .iter()
        .enumerate()
        .map(|(i, &n)| Lemma31Summary {
            n,
            streams: rows.len() as u64,
            in_k: rows.iter().filter(|r| r[i].0).count() as u64,
            violations: rows.iter().filter(|r| !r[i].1).count() as u64,
            trace_mismatches: rows.iter().filter(|r| !r[i].2).count() as u64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_identity_small() {
        let cfg = ExperimentConfig { trials: 20, workers: 1, ..Default::default() };
        let r = run_induced_check(&cfg, 30).unwrap();
        assert!(r.failures.is_empty());
    }

    #[test]
    fn lemma31_small() {
        let cfg = ExperimentConfig { trials: 30, horizons: vec![10, 100, 300], workers: 2, ..Default::default() };
        for s in run_lemma31_check(&cfg).unwrap() {
            assert_eq!((s.violations, s.trace_mismatches), (0, 0), "{s:?}");
            assert!(s.in_k > 0);
        }
    }
}
