use thiserror::Error;

/// Errors raised when an input violates a documented precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EflError {
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("cut lengths must be nonnegative and sum to 1 (sum = {sum}, min = {min})")]
    NotOnSimplex { sum: f64, min: f64 },
    #[error("cut points must be sorted and lie in [0, 1]")]
    BadCutPoints,
    #[error("not a bijection on 1..={0}")]
    NotBijection(usize),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid epsilon chain: {0}")]
    InvalidEpsilons(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid box allocation: {0}")]
    InvalidBoxes(String),
    #[error("not a perfect matching of the graph")]
    NotAMatching,
    #[error("invalid half-space system: {0}")]
    InvalidHalfspaces(String),
}

pub type Result<T> = std::result::Result<T, EflError>;
