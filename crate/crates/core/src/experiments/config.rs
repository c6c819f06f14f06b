use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::DEFAULT_REFINE_CAP;

/// Which exact engine produces the digits of a random real.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Conditional-law chain: digit `k+1` sampled given digits `1..=k`.
    #[default]
    Chain,
    /// Möbius-state refinement of one dyadic interval.
    Mobius,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Engine::Chain),
            "mobius" => Ok(Engine::Mobius),
            _ => Err(Error::invalid(format!("unknown engine `{s}` (chain | mobius)"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Chain => "chain",
            Engine::Mobius => "mobius",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::invalid(format!("unknown format `{s}` (csv | json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Parameters of a Monte Carlo run. `workers = 0` means one per core.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub trials: u64,
    /// Horizons `n`, or digit-count checkpoints for single-orbit runs.
    pub horizons: Vec<u64>,
    pub epsilons: Vec<f64>,
    pub workers: usize,
    pub refine_cap: u32,
    pub engine: Engine,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: 42,
            trials: 1000,
            horizons: vec![1000],
            epsilons: vec![0.1, 0.3, 0.5],
            workers: 0,
            refine_cap: DEFAULT_REFINE_CAP,
            engine: Engine::Chain,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.horizons.is_empty() {
            return Err(Error::invalid("at least one horizon n is required"));
        }
        if let Some(n) = self.horizons.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("horizon {n} below 2")));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::invalid(format!("epsilon {e} outside (0, 1)")));
        }
        if self.refine_cap == 0 {
            return Err(Error::invalid("refine cap must be positive"));
        }
        Ok(())
    }

    /// Horizons sorted ascending without duplicates.
    pub fn schedule(&self) -> Vec<u64> {
        let mut h = self.horizons.clone();
        h.sort_unstable();
        h.dedup();
        h
    }

    /// Apply one `key=value` setting. List keys (`n`, `epsilon`) take
    /// comma-separated values and replace the current list.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::invalid(format!("bad value `{value}` for {what}"));
        match key {
            "seed" | "master_seed" => self.master_seed = value.parse().map_err(|_| bad(key))?,
            "trials" => self.trials = value.parse().map_err(|_| bad(key))?,
            "n" | "horizons" => {
                self.horizons = split_list(value).map(|v| v.parse().map_err(|_| bad(key))).collect::<Result<_>>()?
            }
            "epsilon" | "epsilons" => {
                self.epsilons = split_list(value).map(|v| v.parse().map_err(|_| bad(key))).collect::<Result<_>>()?
            }
            "workers" => self.workers = value.parse().map_err(|_| bad(key))?,
            "refine_cap" | "refine-cap" => self.refine_cap = value.parse().map_err(|_| bad(key))?,
            "engine" => self.engine = value.parse()?,
            "format" => self.format = value.parse()?,
            _ => return Err(Error::invalid(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Parse `key=value` lines; `#` starts a comment.
    pub fn apply_kv_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv_text(text)?;
        Ok(cfg)
    }

    /// Canonical `key=value` form of the settings that affect results.
    /// Worker count and output format are excluded.
    pub fn canonical(&self) -> String {
        let list = |v: &[String]| v.join(",");
        let n: Vec<String> = self.horizons.iter().map(u64::to_string).collect();
        let e: Vec<String> = self.epsilons.iter().map(f64::to_string).collect();
        format!(
            "engine={}\nepsilon={}\nn={}\nrefine_cap={}\nseed={}\ntrials={}\n",
            self.engine,
            list(&e),
            list(&n),
            self.refine_cap,
            self.master_seed,
            self.trials
        )
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty())
}
