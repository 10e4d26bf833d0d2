//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SdrError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SdrError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed image: {0}")]
    MalformedImage(String),

    #[error("image too small: {width}x{height} (minimum 3x3)")]
    ImageTooSmall { width: usize, height: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("atom budget {budget} unreachable: at most epsilon the minimum achievable count is {min_count}")]
    BudgetUnreachable { budget: usize, min_count: usize },

    #[error("hardware constraint violated: {0}")]
    Hardware(String),

    #[error("coincident atoms {0} and {1}")]
    CoincidentAtoms(usize, usize),

    #[error("basis too large: {0}")]
    BasisTooLarge(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.1e} at t = {time} us; reduce the time step")]
    NormDrift {
        drift: f64,
        tolerance: f64,
        time: f64,
    },

    #[error("empty database")]
    EmptyDatabase,

    #[error("no database entries could be built ({skipped} inputs skipped)")]
    NoEntries { skipped: usize },

    #[error("database error: {0}")]
    Database(String),

    #[error("checksum mismatch for entry `{0}`")]
    ChecksumMismatch(String),

    #[error("unsupported schema version {0}")]
    UnsupportedVersion(u64),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl SdrError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SdrError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SdrError::InvalidArgument(msg.into())
    }
}
