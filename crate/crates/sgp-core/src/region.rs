//! Box constraint sets with componentwise bounds.

use crate::error::{invalid_input, CoreError};
use crate::scalar::Scalar;

/// A nonempty closed box `{x : lower ≤ x ≤ upper}` with `±∞` bounds allowed.
///
/// Specializing the constraint set to boxes (including the nonnegative
/// orthant) keeps the scaled projection closed-form for diagonal metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleRegion<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> FeasibleRegion<T> {
    /// Builds a box from per-coordinate bounds; requires `lower_i ≤ upper_i`
    /// with no NaN entries.
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self, CoreError> {
        if lower.len() != upper.len() {
            return Err(CoreError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() {
                return Err(invalid_input(format!("NaN bound at coordinate {i}")));
            }
            if lo > hi {
                return Err(invalid_input(format!(
                    "empty box: lower > upper at coordinate {i}"
                )));
            }
            if lo == T::infinity() || hi == T::neg_infinity() {
                return Err(invalid_input(format!(
                    "empty box: infinite one-sided bound at coordinate {i}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The nonnegative orthant `x ≥ 0` in dimension `n`.
    pub fn nonnegative(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            upper: vec![T::infinity(); n],
        }
    }

    /// A uniform box `[lo, hi]^n`.
    pub fn uniform(n: usize, lo: T, hi: T) -> Result<Self, CoreError> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Componentwise clamp of a single value into `[lower_i, upper_i]`.
    #[inline]
    pub fn clamp_coord(&self, i: usize, v: T) -> T {
        v.max(self.lower[i]).min(self.upper[i])
    }

    /// Euclidean projection: clamps every coordinate into its interval.
    pub fn project(&self, x: &[T], out: &mut [T]) {
        for i in 0..x.len() {
            out[i] = self.clamp_coord(i, x[i]);
        }
    }

    /// Membership test (inclusive bounds; NaN coordinates are outside).
    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .enumerate()
                .all(|(i, &v)| !v.is_nan() && v >= self.lower[i] && v <= self.upper[i])
    }
}
