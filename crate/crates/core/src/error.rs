use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input vector is empty")]
    Empty,
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoiseVariance(f64),
    #[error("threshold must be nonnegative and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("threshold {tau} coincides with the magnitude of entry {index}; SURE is undefined there")]
    ThresholdAtMagnitude { tau: f64, index: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("degenerate search grid: {0}")]
    DegenerateGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("regularized Gram matrix is numerically singular (condition number {condition:.3e})")]
    Singular { condition: f64 },
    #[error("{0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
