use thiserror::Error;

/// Exit status for a run that completed and found nothing wrong.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_ORACLE_PRECISION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{failed} invariant check(s) failed")]
    InvariantFailure { failed: usize },
    #[error(transparent)]
    Library(#[from] chebasym::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvariantFailure { .. } => EXIT_INVARIANT,
            CliError::Library(chebasym::Error::OraclePrecision { .. }) => EXIT_ORACLE_PRECISION,
            _ => EXIT_USAGE,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
