use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("operands disagree: {0}")]
    Mismatch(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("size budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget { what: String, needed: u64, budget: u64 },
    #[error("size limit: {0}")]
    Size(String),
    #[error("unsupported scope: {0}")]
    Unsupported(String),
    #[error("lattice is rank deficient: rank {rank}, ambient dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("element outside the ideal: {0}")]
    NotInIdeal(String),
    #[error("value does not fit: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
