use std::path::PathBuf;

use thiserror::Error;
use twomode_core::{OracleError, WitnessError};

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Oracle(OracleError::Infeasible { .. }) => 3,
            CliError::Oracle(OracleError::TailTolerance(_) | OracleError::Param(_)) => 2,
            CliError::Io { .. } => 4,
            CliError::Oracle(_) | CliError::Witness(_) => 1,
        }
    }
}
