use thiserror::Error;

/// Crate-wide error type.
///
/// `Invalid` is reserved for parameter validation failures (out-of-range
/// settings, malformed requests); callers that map errors to process exit
/// codes treat it as a usage error and everything else as a runtime error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("partition error: {0}")]
    Partition(String),

    #[error("{what} did not converge within {iters} iterations")]
    NoConvergence { what: &'static str, iters: usize },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
