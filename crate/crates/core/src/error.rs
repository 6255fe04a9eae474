use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity mismatch: expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("sequence is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
