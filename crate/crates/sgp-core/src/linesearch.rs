//! Armijo backtracking along a descent direction.

use crate::error::{invalid_parameter, CoreError};
use crate::scalar::Scalar;

/// Parameters of the Armijo sufficient-decrease test
/// `f(x + λd) ≤ f(x) + β λ ∇f(x)ᵀd` with geometric backtracking `λ ← δλ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchParams<T> {
    /// Sufficient-decrease fraction, in `(0, 1)`.
    pub beta: T,
    /// Backtracking factor, in `(0, 1)`.
    pub delta: T,
    /// Budget of reductions before the search is declared failed.
    pub max_backtracks: u32,
}

impl<T: Scalar> Default for LineSearchParams<T> {
    fn default() -> Self {
        Self {
            beta: T::of(1e-4),
            delta: T::of(0.5),
            max_backtracks: 60,
        }
    }
}

impl<T: Scalar> LineSearchParams<T> {
    pub fn new(beta: T, delta: T, max_backtracks: u32) -> Result<Self, CoreError> {
        let unit = T::zero()..T::one();
        if !unit.contains(&beta) || beta == T::zero() {
            return Err(invalid_parameter("beta must lie in (0, 1)"));
        }
        if !unit.contains(&delta) || delta == T::zero() {
            return Err(invalid_parameter("delta must lie in (0, 1)"));
        }
        if max_backtracks == 0 {
            return Err(invalid_parameter("max_backtracks must be positive"));
        }
        Ok(Self {
            beta,
            delta,
            max_backtracks,
        })
    }
}

/// Outcome of a successful Armijo search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchResult<T> {
    /// Accepted steplength, the largest `δ^m ≤ 1` passing the test.
    pub lambda: T,
    /// `f(x + λd)` at the accepted point.
    pub f_new: T,
    /// Number of reductions performed.
    pub backtracks: u32,
}

/// Backtracks `λ` over the exact geometric grid `{1, δ, δ², …}` until the
/// Armijo inequality holds.
///
/// `fx` is `f(x)` and `directional` is `∇f(x)ᵀd`, which must be negative.
/// Non-finite trial values simply fail the test and trigger another
/// reduction; exhausting the budget usually means the gradient oracle and
/// the value oracle disagree.
pub fn armijo_linesearch<T, F>(
    f: F,
    x: &[T],
    fx: T,
    d: &[T],
    directional: T,
    params: &LineSearchParams<T>,
) -> Result<LineSearchResult<T>, CoreError>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if !(directional < T::zero()) {
        return Err(CoreError::NotDescentDirection {
            directional: directional.to_f64().unwrap_or(f64::NAN),
        });
    }
    if x.len() != d.len() {
        return Err(CoreError::DimensionMismatch {
            expected: x.len(),
            got: d.len(),
        });
    }

    let mut lambda = T::one();
    let mut trial = vec![T::zero(); x.len()];
    for backtracks in 0..=params.max_backtracks {
        for i in 0..x.len() {
            trial[i] = x[i] + lambda * d[i];
        }
        let f_new = f(&trial);
        if f_new <= fx + params.beta * lambda * directional {
            return Ok(LineSearchResult {
                lambda,
                f_new,
                backtracks,
            });
        }
        lambda *= params.delta;
    }
    Err(CoreError::LineSearchFailed {
        backtracks: params.max_backtracks,
    })
}
