//! Experiment harness: configuration, the property suite, the growth and
//! centrality experiments and their reproducible outputs.

pub mod commands;
pub mod config;
pub mod graphs;
pub mod growth;
pub mod manifest;
pub mod oracle;
pub mod stats;
pub mod svg;
pub mod validate;

use bbig_core::machine::MachineError;
use bbig_core::metrics::MetricsError;
use bbig_core::runner::RunnerError;
use bbig_core::temporal_graph::GraphError;
use thiserror::Error;

use config::ConfigError;

/// Exit status for success, a failed property and a usage error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Runner(#[from] RunnerError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}
