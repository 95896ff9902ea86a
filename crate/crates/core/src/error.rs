//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix/shape sizes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A parameter is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation required a Hermitian matrix and did not get one.
    #[error("matrix is not Hermitian (max |A - A†| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// An operation required a positive-semidefinite matrix.
    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Trace too far from 1 to be a recoverable state estimate.
    #[error("trace {trace:.6} is too far from 1; input looks corrupted")]
    TraceOutOfRange { trace: f64 },

    /// Counts cannot support the requested estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Scenario or state-spec parse failure.
    #[error("config error: {0}")]
    Config(String),

    /// File I/O with path context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON or CSV (de)serialization failure.
    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
