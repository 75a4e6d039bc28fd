//! Command-line front end: figure data, bound checks, roof optimizations and state
//! construction, with deterministic CSV/JSON output.

pub mod commands;
pub mod error;
pub mod figures;
pub mod output;
pub mod spec;

use clap::{Args, ValueEnum};
use serde::Serialize;

use roofs_core::quantum::DEFAULT_FOCK_CUTOFF;
use roofs_core::roofs::OptimizerConfig;

pub use error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Serialize, Args)]
pub struct RunConfig {
    /// Seed for random states and the roof optimizer.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random samples (figure-rs).
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Output format of tabular commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Fock cutoff for two-mode state specs that do not set one.
    #[arg(long, global = true, default_value_t = DEFAULT_FOCK_CUTOFF)]
    pub cutoff: usize,
    /// Optimizer restarts per grouping of the purification.
    #[arg(long, global = true, default_value_t = OptimizerConfig::default().restarts)]
    pub restarts: usize,
    /// Optimizer local-search steps per restart.
    #[arg(long, global = true, default_value_t = OptimizerConfig::default().local_steps)]
    pub local_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        Self {
            seed: 0,
            samples: 200,
            out: None,
            format: Format::Csv,
            cutoff: DEFAULT_FOCK_CUTOFF,
            restarts: opt.restarts,
            local_steps: opt.local_steps,
        }
    }
}

impl RunConfig {
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            restarts: self.restarts,
            local_steps: self.local_steps,
            ..OptimizerConfig::default()
        }
    }
}
