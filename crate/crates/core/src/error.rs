use thiserror::Error;

use crate::laurent::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(Var),

    #[error("division by zero")]
    DivisionByZero,

    /// Exact division left a nonzero remainder.
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("undefined parameter: {0}")]
    UndefinedParameter(String),

    #[error("unsupported in symbolic mode: {0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("series failed to converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
