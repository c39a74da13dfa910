//! Configuration, CSV logging, rate fitting and the acceptance bench behind the `proxkit` binary.

pub mod bench;
pub mod commands;
pub mod config;
pub mod csvio;

use std::fmt;

pub const SEED_ENV: &str = "PROXKIT_SEED";

/// Error carrying the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn io(e: csv::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

impl From<proxkit::Error> for CliError {
    fn from(e: proxkit::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Reads the seed override from the environment.
pub fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::config(format!("{SEED_ENV}: `{s}` is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}
