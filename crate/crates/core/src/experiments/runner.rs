use rayon::prelude::*;
use serde::Serialize;

use super::config::{Engine, ExperimentConfig};
use crate::error::{Error, Result};
use crate::exact::{DigitSource, GaussChain, LazyReal};

/// Resampling attempts per trial before a pathological point is reported.
pub const MAX_RESAMPLES: u64 = 16;

/// Digits of a Lebesgue-random real from the configured engine.
#[derive(Clone, Debug)]
pub enum RandomDigits {
    Chain(GaussChain),
    Mobius(LazyReal),
}

impl RandomDigits {
    pub fn new(cfg: &ExperimentConfig, stream_index: u64) -> Self {
        match cfg.engine {
            Engine::Chain => {
                RandomDigits::Chain(GaussChain::random(cfg.master_seed, stream_index).with_refine_cap(cfg.refine_cap))
            }
            Engine::Mobius => {
                RandomDigits::Mobius(LazyReal::random(cfg.master_seed, stream_index).with_refine_cap(cfg.refine_cap))
            }
        }
    }
}

impl DigitSource for RandomDigits {
    #[inline]
    fn next_digit(&mut self) -> Result<Option<u64>> {
        match self {
            RandomDigits::Chain(c) => c.next_digit(),
            RandomDigits::Mobius(x) => x.next_digit(),
        }
    }
}

/// Counters reported next to every Monte Carlo result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Trials redrawn after a pathological point.
    pub resampled: u64,
}

/// Thread pool with `workers` threads (`0`: one per core).
pub fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))
}

/// Run `trial(stream_index)` for every trial id in parallel and return the
/// results in trial order. A trial hitting a pathological point is redrawn on
/// stream `id + j·trials`, `j = 1, 2, …`.
pub fn run_trials<T, F>(cfg: &ExperimentConfig, trial: F) -> Result<(Vec<T>, Diagnostics)>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let run_one = |id: u64| -> Result<(T, u64)> {
        let mut attempt = 0u64;
        loop {
            match trial(id + attempt * cfg.trials) {
                Ok(v) => return Ok((v, attempt)),
                Err(Error::NonGenericPoint { .. }) if attempt < MAX_RESAMPLES => attempt += 1,
                Err(e) => return Err(e),
            }
        }
    };
    let results: Vec<Result<(T, u64)>> =
        pool(cfg.workers)?.install(|| (0..cfg.trials).into_par_iter().map(run_one).collect());
    let mut out = Vec::with_capacity(results.len());
    let mut diag = Diagnostics::default();
    for r in results {
        let (v, redraws) = r?;
        diag.resampled += redraws;
        out.push(v);
    }
    Ok((out, diag))
}
