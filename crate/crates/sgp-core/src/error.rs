//! Error type shared by the solver building blocks.

use thiserror::Error;

/// Errors raised by projections, linesearches and the solver loop.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// An input violated a precondition (non-finite data, infeasible point).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Vector lengths do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The supplied direction is not a descent direction (`∇f(x)ᵀd ≥ 0`).
    #[error("not a descent direction: directional derivative {directional} is nonnegative")]
    NotDescentDirection { directional: f64 },

    /// Armijo backtracking exhausted its budget; usually a broken gradient
    /// oracle or a non-finite objective.
    #[error("linesearch failed after {backtracks} backtracks")]
    LineSearchFailed { backtracks: u32 },

    /// A steplength rule was asked to use an empty secant pair (`s = 0`).
    #[error("degenerate steplength history: zero point difference")]
    DegenerateHistory,
}

pub(crate) fn invalid_input(msg: impl Into<String>) -> CoreError {
    CoreError::InvalidInput(msg.into())
}

pub(crate) fn invalid_parameter(msg: impl Into<String>) -> CoreError {
    CoreError::InvalidParameter(msg.into())
}
