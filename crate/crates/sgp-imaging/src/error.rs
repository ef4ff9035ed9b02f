//! Error type for the imaging stack.

use sgp_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    /// Solver-level failure propagated from the optimization core.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// Input outside the operation's domain (negative pixels, bad shapes).
    #[error("domain error: {0}")]
    Domain(String),

    /// Point-spread function cannot be normalized or does not fit the image.
    #[error("invalid PSF: {0}")]
    InvalidPsf(String),

    /// Image dimensions do not match.
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    Shape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed image file.
    #[error("format error: {0}")]
    Format(String),

    /// The discrepancy target could not be bracketed.
    #[error("no root: discrepancy stayed on one side of eta after bracket expansion (last interval [{lo}, {hi}] with values [{d_lo}, {d_hi}])")]
    NoRoot {
        lo: f64,
        hi: f64,
        d_lo: f64,
        d_hi: f64,
    },

    /// The secant outer loop ran out of steps.
    #[error("discrepancy solver exceeded {steps} outer steps")]
    OuterLimit { steps: usize },
}

pub(crate) fn domain(msg: impl Into<String>) -> ImagingError {
    ImagingError::Domain(msg.into())
}
