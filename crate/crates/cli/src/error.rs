use std::io;
use std::path::Path;

use thiserror::Error;

/// Failure categories, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::MissingInput(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> CliError {
        match err.kind() {
            io::ErrorKind::NotFound => CliError::MissingInput(format!("{}: file not found", path.display())),
            _ => CliError::Internal(format!("{}: {err}", path.display())),
        }
    }
}

impl From<roofinv::Error> for CliError {
    fn from(err: roofinv::Error) -> Self {
        match err {
            roofinv::Error::Io(e) if e.kind() == io::ErrorKind::NotFound => CliError::MissingInput(e.to_string()),
            roofinv::Error::Io(e) => CliError::Internal(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<roofinv::DomainError> for CliError {
    fn from(err: roofinv::DomainError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}
