//! Batch front end for `mixwidth-core`: instance files, `Ψ` reports, sweeps
//! over `n`, witness search and the randomized verification suites.

pub mod input;
pub mod report;
pub mod run;
pub mod suites;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("instance file line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field {field}: {source}")]
    Field {
        field: String,
        source: mixwidth_core::Error,
    },
    #[error(transparent)]
    Core(#[from] mixwidth_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Estimate,
    Sweep,
    Verify,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Deliberate corruption used to self-test the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Scales one applicable `Φ` branch by 1.5 before the agreement check.
    PhiBranch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub instance: Option<std::path::PathBuf>,
    pub n_from: Option<u64>,
    pub n_to: Option<u64>,
    pub seed: u64,
    pub format: Format,
    pub tolerance_rel: Option<f64>,
    pub trials: usize,
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Estimate,
            instance: None,
            n_from: None,
            n_to: None,
            seed: 1,
            format: Format::Table,
            tolerance_rel: None,
            trials: 500,
            fault: None,
        }
    }
}
