//! Quadratic objectives for benchmarks and tests.

use crate::error::{invalid_input, CoreError};
use crate::objective::SmoothObjective;
use crate::scalar::Scalar;

/// Dense quadratic `f(x) = ½ xᵀQx + cᵀx` with symmetric `Q`.
#[derive(Debug, Clone)]
pub struct Quadratic<T> {
    q: Vec<T>,
    c: Vec<T>,
    n: usize,
    lipschitz: Option<T>,
}

impl<T: Scalar> Quadratic<T> {
    /// `q` is `n×n` row-major and must be symmetric; symmetry is the
    /// caller's responsibility.
    pub fn new(q: Vec<T>, c: Vec<T>) -> Result<Self, CoreError> {
        let n = c.len();
        if q.len() != n * n {
            return Err(CoreError::DimensionMismatch {
                expected: n * n,
                got: q.len(),
            });
        }
        if !q.iter().chain(&c).all(|v| v.is_finite()) {
            return Err(invalid_input("non-finite quadratic coefficients"));
        }
        Ok(Self {
            q,
            c,
            n,
            lipschitz: None,
        })
    }

    /// Attaches a known Lipschitz constant of the gradient (`λ_max(Q)`).
    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn matrix(&self) -> &[T] {
        &self.q
    }

    pub fn linear(&self) -> &[T] {
        &self.c
    }
}

impl<T: Scalar> SmoothObjective<T> for Quadratic<T> {
    fn dimension(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            let row = &self.q[i * self.n..(i + 1) * self.n];
            let qx: T = row.iter().zip(x).map(|(&q, &xj)| q * xj).sum();
            acc += x[i] * (T::of(0.5) * qx + self.c[i]);
        }
        acc
    }

    fn gradient(&self, x: &[T], grad: &mut [T]) {
        for (i, g) in grad.iter_mut().enumerate() {
            let row = &self.q[i * self.n..(i + 1) * self.n];
            let qx: T = row.iter().zip(x).map(|(&q, &xj)| q * xj).sum();
            *g = qx + self.c[i];
        }
    }

    fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
}

/// Separable quadratic `f(x) = ½ Σ h_i (x_i - t_i)²` with `h_i > 0`.
///
/// Its box-constrained minimizer is the componentwise clamp of `t`, handy as
/// a closed-form reference for benchmark smoke problems.
#[derive(Debug, Clone)]
pub struct SeparableQuadratic<T> {
    h: Vec<T>,
    t: Vec<T>,
}

impl<T: Scalar> SeparableQuadratic<T> {
    pub fn new(h: Vec<T>, t: Vec<T>) -> Result<Self, CoreError> {
        if h.len() != t.len() {
            return Err(CoreError::DimensionMismatch {
                expected: h.len(),
                got: t.len(),
            });
        }
        if !h.iter().all(|&v| v.is_finite() && v > T::zero()) {
            return Err(invalid_input("curvatures must be positive and finite"));
        }
        if !t.iter().all(|v| v.is_finite()) {
            return Err(invalid_input("targets must be finite"));
        }
        Ok(Self { h, t })
    }

    pub fn curvatures(&self) -> &[T] {
        &self.h
    }

    pub fn targets(&self) -> &[T] {
        &self.t
    }

    /// Closed-form minimizer over a box: clamp the unconstrained optimum.
    pub fn box_minimizer(&self, lower: &[T], upper: &[T]) -> Vec<T> {
        self.t
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(&t, (&lo, &hi))| t.max(lo).min(hi))
            .collect()
    }
}

impl<T: Scalar> SmoothObjective<T> for SeparableQuadratic<T> {
    fn dimension(&self) -> usize {
        self.h.len()
    }

    fn value(&self, x: &[T]) -> T {
        let half = T::of(0.5);
        x.iter()
            .zip(self.h.iter().zip(&self.t))
            .map(|(&xi, (&hi, &ti))| half * hi * (xi - ti) * (xi - ti))
            .sum()
    }

    fn gradient(&self, x: &[T], grad: &mut [T]) {
        for i in 0..x.len() {
            grad[i] = self.h[i] * (x[i] - self.t[i]);
        }
    }

    fn lipschitz(&self) -> Option<T> {
        self.h
            .iter()
            .copied()
            .fold(None, |m, v| Some(match m {
                None => v,
                Some(acc) => acc.max(v),
            }))
    }
}
