//! `farey`: digit dumps, Monte Carlo drivers and operator traces.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use farey_renewal::experiments::{Engine, OutputFormat};

#[derive(Parser, Debug)]
#[command(name = "farey", version, about = "Continued-fraction digit sums seen through the Farey map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Precedence: flags > `--config` file > defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Master seed of the keyed bit streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Horizon or checkpoint; repeat or comma-separate for a schedule.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Tail threshold in (0, 1); repeatable.
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Vec<f64>,
    /// Worker threads (0: one per logical core). Does not affect results.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output path (a directory for `simulate`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// key=value config file; `#` starts a comment.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Refinement bits allowed per digit or branch decision.
    #[arg(long = "refine-cap")]
    pub refine_cap: Option<u32>,
    /// Digit engine for random reals: chain | mobius.
    #[arg(long)]
    pub engine: Option<Engine>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump continued-fraction digits with running statistics.
    Expand {
        /// Rational input `p/q` with 0 < p < q.
        #[arg(long)]
        rational: Option<String>,
        /// Named constant: golden, silver or sqrt:N.
        #[arg(long)]
        constant: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Fluctuation process `X_n` across trials: per-trial rows and a summary.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Tail frequencies of `(n − X_n)/n` against `−log ε/log n`.
    Tail {
        #[command(flatten)]
        common: Common,
    },
    /// Grid iterates of the transfer operator at probes in (1/2, 1].
    Operator {
        /// one | id | power:θ with θ in (0, 1].
        #[arg(long, default_value = "id")]
        density: String,
        /// Probe point; repeatable.
        #[arg(long, value_delimiter = ',')]
        probe: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Classical digit laws: khinchin, diamond-vaaler, weak-law, stable, ly.
    Classic {
        #[arg(long)]
        which: String,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(context: &str, e: std::io::Error) -> Self {
        Self { code: 4, message: format!("{context}: {e}") }
    }
}

impl From<farey_renewal::Error> for Failure {
    fn from(e: farey_renewal::Error) -> Self {
        let code = match e {
            farey_renewal::Error::InvalidInput(_) => 2,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand { rational, constant, count, common } => {
            commands::expand(&common, rational.as_deref(), constant.as_deref(), count)
        }
        Command::Simulate { common } => commands::simulate(&common),
        Command::Tail { common } => commands::tail(&common),
        Command::Operator { density, probe, common } => commands::operator(&common, &density, &probe),
        Command::Classic { which, common } => commands::classic(&common, &which),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("farey: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
