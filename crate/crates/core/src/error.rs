use thiserror::Error;

/// Errors produced by the homology engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of consecutive differentials is nonzero ({nonzero} entries) at degree {degree}")]
    NonzeroComposite { degree: i64, nonzero: usize },
    #[error("label out of range: {0}")]
    BadLabel(String),
    #[error("arity {arity} exceeds cap {cap}")]
    ArityCap { arity: usize, cap: usize },
    #[error("bar homology of arity {arity} is not concentrated in top degree (H_{degree} has dim {dim})")]
    NotKoszul { arity: usize, degree: usize, dim: usize },
    #[error("missing Koszul data for arity {0}")]
    MissingKoszul(usize),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
