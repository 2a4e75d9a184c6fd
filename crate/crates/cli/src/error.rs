use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(jc_core::Error),

    #[error("oracle deviation {max_abs:e} in column {column} at t = {time} exceeds {threshold:e}")]
    OracleDeviation {
        column: String,
        time: f64,
        max_abs: f64,
        threshold: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::OracleDeviation { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<jc_core::Error> for CliError {
    // Input errors from the kernels mean the scenario itself is unusable.
    fn from(err: jc_core::Error) -> Self {
        match err {
            jc_core::Error::InvalidInput(msg) => CliError::Validation(msg),
            other if other.is_numerical() => CliError::Numerical(other),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
