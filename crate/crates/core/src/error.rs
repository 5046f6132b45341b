use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClweError {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("element is not invertible")]
    NotInvertible,

    #[error("no invertible pivot among {0} samples")]
    InsufficientSamples(usize),

    #[error("refusing exhaustive check over {0} members (limit 10^4)")]
    TooLarge(u64),

    #[error("correctness identity violated at coefficient {index}: {lhs} != {rhs}")]
    IdentityViolation { index: usize, lhs: u64, rhs: u64 },

    #[error("transpose cross-check failed: dual-algebra and explicit matrix routes differ")]
    CrossCheck,

    #[error("malformed encoding: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, ClweError>;
