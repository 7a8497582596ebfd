use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The CLI maps [`Error::Config`] and argument-level validation to exit code 2
/// and everything data-related to exit code 3, see [`Error::is_data_error`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("input shape mismatch: {0}")]
    InputShape(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{qubits} qubits requested but the simulator cap is {cap}")]
    Capacity { qubits: usize, cap: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from the data rather than from how the run was configured.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
