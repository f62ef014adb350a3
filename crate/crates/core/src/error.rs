use thiserror::Error;

/// Errors produced by the search framework and the bound verifiers.
///
/// `HypothesisViolation` is deliberately distinct from `InvalidParameter`:
/// a verifier invoked outside a theorem's hypotheses refuses to run, since
/// an out-of-hypothesis instance says nothing about the bound.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidProbabilityVector(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("enumeration cap exceeded: {what} = {requested} > cap {cap}")]
    EnumerationCapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("history tree too large: {leaves} leaves > cap {cap}")]
    HistoryTreeCapExceeded { leaves: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
