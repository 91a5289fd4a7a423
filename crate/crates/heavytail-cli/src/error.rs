//! CLI error taxonomy and exit codes.
//!
//! Input problems (bad flags, malformed files, impossible configurations)
//! exit with 2; numerical failures inside the engine exit with 3. Every
//! failure prints exactly one machine-parsable line to stderr of the form
//! `error: input: ...` or `error: numeric: ...`.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("error: input: {0}")]
    Input(String),
    #[error("error: numeric: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn numeric(msg: impl std::fmt::Display) -> Self {
        CliError::Numeric(msg.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
