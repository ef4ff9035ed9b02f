//! Split-gradient diagonal scaling for the KL + HS problem.
//!
//! Writing the regularizer gradient as `∇HS = V - U` with `V, U ≥ 0` on the
//! nonnegative orthant, the per-pixel scaling suggestion is
//! `x_i / (1 + ν V_i)`, clamped into the schedule band `[1/μ_k, μ_k]`. Small
//! pixels get small metric entries (the multiplicative-update flavor of
//! Poisson deconvolution), while the clamp keeps the matrix inside `M_{μ_k}`.

use sgp_core::{BoundSchedule, DiagonalMetric, MetricProvider, Scalar};

use crate::error::ImagingError;
use crate::hs::HsRegularizer;

/// `D_ii = clamp(x_i / (1 + ν V_i), 1/μ_k, μ_k)` from a precomputed split
/// component `V`.
pub fn build_scaling<T: Scalar>(
    x: &[T],
    nu: T,
    v: &[T],
    mu_k: T,
) -> Result<DiagonalMetric<T>, ImagingError> {
    let suggestion: Vec<T> = x
        .iter()
        .zip(v)
        .map(|(&xi, &vi)| xi / (T::one() + nu * vi))
        .collect();
    DiagonalMetric::clamped(&suggestion, mu_k).map_err(Into::into)
}

/// Metric provider computing the split-gradient scaling at every iteration.
pub struct SplitGradientScaling<T> {
    reg: HsRegularizer<T>,
    nu: T,
    schedule: BoundSchedule<T>,
}

impl<T: Scalar> SplitGradientScaling<T> {
    pub fn new(reg: HsRegularizer<T>, nu: T, schedule: BoundSchedule<T>) -> Self {
        Self { reg, nu, schedule }
    }

    pub fn schedule(&self) -> &BoundSchedule<T> {
        &self.schedule
    }
}

impl<T: Scalar> MetricProvider<T> for SplitGradientScaling<T> {
    fn metric_at(&mut self, k: usize, x: &[T], _grad: &[T]) -> DiagonalMetric<T> {
        let mu = self.schedule.mu_at(k).expect("solver passes k >= 1");
        let (v, _u) = self
            .reg
            .split_gradient(x)
            .expect("solver keeps iterates nonnegative");
        build_scaling(x, self.nu, &v, mu).expect("finite scaling suggestion")
    }
}
