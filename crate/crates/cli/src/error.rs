use std::fmt;

use cib_core::config::ConfigError;
use cib_core::ingest::IngestError;
use cib_core::rating::RatingError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Unreadable or invalid input files, flags or config.
    pub const INPUT: i32 = 2;
    /// Inputs parse but cannot be compared.
    pub const EVALUATION: i32 = 3;
    /// Output could not be written, or a self-check failed.
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: exit::INPUT,
            message: message.into(),
        }
    }

    pub fn evaluation(message: impl Into<String>) -> Self {
        CliError {
            code: exit::EVALUATION,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: exit::INTERNAL,
            message: message.into(),
        }
    }

    /// An error while writing outputs.
    pub fn output(e: IngestError) -> Self {
        CliError::internal(format!("writing output: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<RatingError> for CliError {
    fn from(e: RatingError) -> Self {
        match e {
            RatingError::NoSharedKeys { .. } | RatingError::NoPairs => {
                CliError::evaluation(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }
}
