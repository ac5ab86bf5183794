use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0}! does not fit in 64 bits (largest supported is 20!)")]
    FactorialOverflow(u64),

    #[error("rank {rank} out of range for n = {n} (must be below {limit})")]
    RankOutOfRange { rank: u64, n: usize, limit: u64 },

    #[error("digit {digit} at place {place} exceeds its bound {place}")]
    DigitOutOfRange { digit: u64, place: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance parse error: {0}")]
    Parse(String),

    #[error("empty cost distribution")]
    EmptyDistribution,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid criterion: {0}")]
    InvalidCriterion(String),
}
