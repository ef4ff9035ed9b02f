//! Value + gradient oracles for smooth objectives.

use crate::scalar::Scalar;

/// A continuously differentiable objective on a feasible region.
///
/// Implementations must be safe for concurrent read-only use (`Send + Sync`)
/// so independent solver runs can share one oracle. Value and gradient are
/// expected to be finite on the feasible region; the solver treats
/// non-finite values at the starting point as an input error and non-finite
/// linesearch trials as failed sufficient-decrease tests.
pub trait SmoothObjective<T: Scalar>: Send + Sync {
    /// Number of variables.
    fn dimension(&self) -> usize;

    /// Objective value `f(x)`.
    fn value(&self, x: &[T]) -> T;

    /// Gradient `∇f(x)` written into `grad`.
    fn gradient(&self, x: &[T], grad: &mut [T]);

    /// Combined evaluation; override when value and gradient share work.
    fn value_and_gradient(&self, x: &[T], grad: &mut [T]) -> T {
        self.gradient(x, grad);
        self.value(x)
    }

    /// A Lipschitz constant for `∇f` on the feasible region, when known.
    fn lipschitz(&self) -> Option<T> {
        None
    }
}

/// Objective assembled from closures, mostly for tests and small problems.
pub struct FnObjective<T, F, G> {
    dimension: usize,
    value: F,
    gradient: G,
    lipschitz: Option<T>,
}

impl<T, F, G> FnObjective<T, F, G>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Send + Sync,
    G: Fn(&[T], &mut [T]) + Send + Sync,
{
    pub fn new(dimension: usize, value: F, gradient: G) -> Self {
        Self {
            dimension,
            value,
            gradient,
            lipschitz: None,
        }
    }

    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }
}

impl<T, F, G> SmoothObjective<T> for FnObjective<T, F, G>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Send + Sync,
    G: Fn(&[T], &mut [T]) + Send + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, x: &[T]) -> T {
        (self.value)(x)
    }

    fn gradient(&self, x: &[T], grad: &mut [T]) {
        (self.gradient)(x, grad)
    }

    fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
}
