//! Monte Carlo and single-orbit experiments. Every run is a pure function of
//! its [`ExperimentConfig`]: trial `i` reads stream `i` of the master seed and
//! results are merged in trial order, so the worker count never matters.

mod classic;
mod config;
mod identities;
mod runner;
mod uniform;

pub use classic::{
    centered_sum, run_diamond_vaaler, run_diamond_vaaler_with, run_khinchin, run_khinchin_with, run_stable_stability,
    run_stable_stability_with, run_weak_law, run_weak_law_with, Checkpoint, OrbitReport, StableReport, WeakLawReport,
    WeakLawSummary, INV_LN_2, KHINCHIN,
};
pub use config::{Engine, ExperimentConfig, OutputFormat};
pub use identities::{run_induced_check, run_lemma31_check, InducedReport, Lemma31Summary};
pub use runner::{pool, run_trials, Diagnostics, RandomDigits, MAX_RESAMPLES};
pub use uniform::{
    run_large_deviation, run_ly_uniform_law, run_ly_uniform_law_with, run_uniform_law, run_uniform_law_with,
    SpentTimeRun, TailReport, UniformLawRun, UniformLawSummary,
};
