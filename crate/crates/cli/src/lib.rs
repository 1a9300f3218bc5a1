//! Configuration-driven experiment runner for the `hisd` library.

pub mod config;
pub mod run;

pub use config::{parse_config, EnergyKind, ExperimentConfig, Mode};
pub use run::run_experiment;

use hisd::HisdError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failed during `{stage}`: {source}")]
    Solver {
        stage: &'static str,
        #[source]
        source: HisdError,
    },
    #[error("i/o failed during `{stage}`: {detail}")]
    Io { stage: &'static str, detail: String },
}

impl CliError {
    /// Process exit status: 1 for configuration, 2 for the solver, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn from_hisd(stage: &'static str, e: HisdError) -> Self {
        if e.is_io() {
            CliError::Io { stage, detail: e.to_string() }
        } else {
            CliError::Solver { stage, source: e }
        }
    }
}
