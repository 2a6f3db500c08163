use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("i + j must be odd for C_{{i,j}}, got ({i}, {j})")]
    EvenIndexSum { i: i64, j: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("parse error: {0}")]
    Parse(String),
}
