use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the projection, baseline and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("group {index} has size zero")]
    EmptyGroup { index: usize },

    #[error("group sizes sum to {sum} but the vector has {len} entries")]
    GroupSizeMismatch { sum: usize, len: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("invalid radius {0}: radii must be finite and nonnegative")]
    InvalidRadius(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bisection did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("inconsistent region: {0}")]
    InconsistentRegion(String),

    #[error("oracle failed: {0}")]
    OracleFailure(String),
}
