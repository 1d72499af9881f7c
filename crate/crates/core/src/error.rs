use thiserror::Error;

/// Errors raised by the scheduling library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("malformed tour: {0}")]
    MalformedTour(String),

    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),

    #[error("node {node} has demand {demand} J but no charging direction reaches it")]
    Uncoverable { node: usize, demand: f64 },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("instance too large: {n} points (limit {max})")]
    Size { n: usize, max: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
