//! Front end for `skewtaylor`: spec parsing and the subcommands.

pub mod commands;
pub mod spec;

pub use commands::{run, Command, Format, Report, RunOptions};
pub use spec::{parse_spec, ProblemSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 verification failure, 2 input error, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<skewtaylor_core::Error> for CliError {
    fn from(e: skewtaylor_core::Error) -> Self {
        use skewtaylor_core::Error as E;
        match e {
            E::BudgetExceeded(msg) => CliError::Budget(msg),
            E::TooManyGenerators { .. } => CliError::Budget(e.to_string()),
            E::NegativeDeviation { .. } => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
