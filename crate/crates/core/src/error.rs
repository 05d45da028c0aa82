use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a complex at position {position}: {detail}")]
    NotAComplex { position: i32, detail: String },
    #[error("identity `{identity}` fails at index {index}: {residual}")]
    IdentityFailure {
        identity: String,
        index: i32,
        residual: String,
    },
    #[error("linear system has no solution: {0}")]
    Unsolvable(String),
    #[error("truncation insufficient: {0}")]
    Truncation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
