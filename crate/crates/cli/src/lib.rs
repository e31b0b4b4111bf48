//! Command-line front end: configuration, sweeps and CSV rendering.

pub mod commands;
pub mod config;
pub mod error;

use std::fs;
use std::io::Write;
use std::path::Path;

pub use commands::{coeffs, compare, sweep_ratio, witness, Convergence, Output};
pub use config::{ConfigError, MethodChoice, RawConfig, RunConfig};
pub use error::CliError;

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
