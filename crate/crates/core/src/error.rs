use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// A document that does not match its schema; `path` locates the
    /// offending field.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// The LP kernel could not make progress.
    #[error("numerical failure: {message}")]
    NumericalFailure {
        message: String,
        /// Simplex iterations performed before giving up.
        iterations: usize,
        /// Smallest pivot magnitude seen in the failing step.
        pivot: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A sequence whose eccentric denominator vanishes.
    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
