use thiserror::Error;

use crate::poly::Var;

/// Errors surfaced by the exact algebra and geometry routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has rank {found}, expected {expected}")]
    RankError { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("anchor point is not outside the inner polygon")]
    InvalidAnchor,
    #[error("rank-3 geometric decision requires a positive matrix")]
    RequiresPositive,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
