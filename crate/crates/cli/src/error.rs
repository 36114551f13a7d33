use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    /// Malformed input; `origin` names the file and `message` the field or row.
    #[error("{origin}: {message}")]
    Schema { origin: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rawlsian_core::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub(crate) fn schema(origin: &str, message: impl Into<String>) -> Self {
        CliError::Schema { origin: origin.to_string(), message: message.into() }
    }

    /// 2 for bad input, 3 when an internal invariant or solver check fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(rawlsian_core::Error::Invariant(_) | rawlsian_core::Error::Lp(_)) => 3,
            _ => 2,
        }
    }
}
