//! The scaled projection step, its descent certificate, and the SGP loop.

use std::time::Instant;

use crate::error::{invalid_input, invalid_parameter, CoreError};
use crate::linesearch::{armijo_linesearch, LineSearchParams};
use crate::metric::{DiagonalMetric, MetricProvider};
use crate::objective::SmoothObjective;
use crate::record::{IterationEntry, RunRecord, Termination};
use crate::region::FeasibleRegion;
use crate::scalar::Scalar;
use crate::steplength::SteplengthRule;
use crate::vecops;

/// Scaled Euclidean projection of the gradient step onto a box.
///
/// Returns the minimizer over the region of
/// `∇f(x)ᵀ(z - x) + (1/(2α)) (z - x)ᵀ D⁻¹ (z - x)`,
/// which for a diagonal metric over a box is the componentwise clamp of
/// `x - α D ∇f(x)` into `[lower, upper]`. The same clamp also minimizes the
/// model without the ½ on the quadratic term (only the model value changes,
/// not its argmin), so either convention yields this projection.
pub fn scaled_projection<T: Scalar>(
    x: &[T],
    grad: &[T],
    alpha: T,
    metric: &DiagonalMetric<T>,
    region: &FeasibleRegion<T>,
) -> Result<Vec<T>, CoreError> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(invalid_parameter("steplength alpha must be positive"));
    }
    let n = region.dimension();
    if x.len() != n || grad.len() != n || metric.dimension() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if !vecops::all_finite(grad) {
        return Err(invalid_input("non-finite gradient entries"));
    }
    let d = metric.entries();
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        y[i] = region.clamp_coord(i, x[i] - alpha * d[i] * grad[i]);
    }
    Ok(y)
}

/// Projected direction `d = y - x` together with its certificate `∇f(x)ᵀd`.
///
/// The certificate satisfies `∇f(x)ᵀd ≤ -‖d‖²_{D⁻¹}/α`, and `d = 0` exactly
/// when `x` is stationary for the box problem.
pub fn descent_direction<T: Scalar>(
    x: &[T],
    grad: &[T],
    alpha: T,
    metric: &DiagonalMetric<T>,
    region: &FeasibleRegion<T>,
) -> Result<(Vec<T>, T), CoreError> {
    let y = scaled_projection(x, grad, alpha, metric, region)?;
    let mut d = y;
    for i in 0..d.len() {
        d[i] -= x[i];
    }
    let directional = vecops::dot(grad, &d);
    Ok((d, directional))
}

/// Fixed-point stationarity residual `‖x - P_Ω(x - ∇f(x))‖₂` (unit step,
/// identity metric); zero exactly at stationary points of the box problem.
pub fn stationarity_residual<T: Scalar>(
    x: &[T],
    objective: &(impl SmoothObjective<T> + ?Sized),
    region: &FeasibleRegion<T>,
) -> T {
    let mut grad = vec![T::zero(); x.len()];
    objective.gradient(x, &mut grad);
    residual_from_gradient(x, &grad, region)
}

pub(crate) fn residual_from_gradient<T: Scalar>(
    x: &[T],
    grad: &[T],
    region: &FeasibleRegion<T>,
) -> T {
    let mut acc = T::zero();
    for i in 0..x.len() {
        let r = x[i] - region.clamp_coord(i, x[i] - grad[i]);
        acc += r * r;
    }
    acc.sqrt()
}

/// Stopping rule for the solver loop; the individual criteria compose by OR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule<T> {
    max_iters: usize,
    relative_f: Option<T>,
    residual: Option<T>,
}

impl<T: Scalar> StoppingRule<T> {
    /// Stop after at most `max_iters` iterations.
    pub fn max_iters(max_iters: usize) -> Self {
        Self {
            max_iters,
            relative_f: None,
            residual: None,
        }
    }

    /// Also stop once `|f(x(k)) - f(x(k-1))| ≤ eps |f(x(k))|`.
    pub fn or_relative_f_change(mut self, eps: T) -> Self {
        self.relative_f = Some(eps);
        self
    }

    /// Also stop once the stationarity residual drops to `tol` or below.
    pub fn or_residual_below(mut self, tol: T) -> Self {
        self.residual = Some(tol);
        self
    }

    pub fn iteration_budget(&self) -> usize {
        self.max_iters
    }
}

/// Borrowed view of one iteration's state, validated in debug builds.
#[derive(Debug, Clone, Copy)]
pub struct IterateState<'a, T> {
    pub k: usize,
    pub x: &'a [T],
    pub y: &'a [T],
    pub d: &'a [T],
    pub alpha: T,
    pub lambda: T,
    pub metric: &'a DiagonalMetric<T>,
}

impl<T: Scalar> IterateState<'_, T> {
    /// `y` feasible (the clamp guarantees it bitwise), `x` feasible up to
    /// accumulated rounding of the segment steps, `d = y - x` exactly, and
    /// `0 < λ ≤ 1`.
    pub fn invariants_hold(&self, region: &FeasibleRegion<T>) -> bool {
        let x_feasible = self.x.iter().enumerate().all(|(i, &xi)| {
            let slack = T::epsilon() * T::of(4.0) * (T::one() + xi.abs());
            xi >= region.lower()[i] - slack && xi <= region.upper()[i] + slack
        });
        x_feasible
            && region.contains(self.y)
            && self
                .d
                .iter()
                .enumerate()
                .all(|(i, &di)| di == self.y[i] - self.x[i])
            && self.lambda > T::zero()
            && self.lambda <= T::one()
            && self.alpha > T::zero()
    }
}

/// Result of a solver run.
#[derive(Debug, Clone)]
pub struct SgpOutcome<T> {
    /// Final iterate.
    pub x: Vec<T>,
    /// Per-iteration trace and termination reason.
    pub record: RunRecord<T>,
}

/// Runs the scaled gradient projection loop from `x0`.
///
/// Each iteration builds `D_k` from the metric provider (schedule index
/// `k ≥ 1`), picks `α_k` from the steplength rule, projects the scaled
/// gradient step, backtracks along the segment with the Armijo rule and
/// accepts `x(k+1) = x(k) + λ(k) d(k)`. A zero direction terminates the run
/// immediately with [`Termination::Stationary`], since that happens exactly
/// at stationary points.
///
/// With [`IdentityMetric`](crate::metric::IdentityMetric) and a constant
/// steplength the loop is plain gradient projection.
pub fn sgp_solve<T: Scalar>(
    objective: &(impl SmoothObjective<T> + ?Sized),
    region: &FeasibleRegion<T>,
    metric_provider: &mut (impl MetricProvider<T> + ?Sized),
    steplength: &mut (impl SteplengthRule<T> + ?Sized),
    ls_params: &LineSearchParams<T>,
    stop: &StoppingRule<T>,
    x0: &[T],
) -> Result<SgpOutcome<T>, CoreError> {
    let n = objective.dimension();
    if region.dimension() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: region.dimension(),
        });
    }
    if x0.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if !region.contains(x0) {
        return Err(invalid_input("starting point outside the feasible region"));
    }

    let started = Instant::now();
    let mut x = x0.to_vec();
    let mut grad = vec![T::zero(); n];
    let mut f = objective.value_and_gradient(&x, &mut grad);
    if !f.is_finite() {
        return Err(invalid_input("objective not finite at the starting point"));
    }
    let initial_f = f;

    let mut entries: Vec<IterationEntry<T>> = Vec::new();
    let mut termination = Termination::MaxIterations;
    let mut grad_new = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut have_secant = false;

    for k in 1..=stop.max_iters {
        let metric = metric_provider.metric_at(k, &x, &grad);
        let alpha = if have_secant {
            steplength.next_alpha(&s, &z, &metric)
        } else {
            steplength.initial_alpha(&metric)
        };

        let y = scaled_projection(&x, &grad, alpha, &metric, region)?;
        let mut d = y.clone();
        for i in 0..n {
            d[i] -= x[i];
        }
        let directional = vecops::dot(&grad, &d);
        let d_norm = vecops::norm2(&d);

        if d_norm == T::zero() {
            termination = Termination::Stationary;
            break;
        }

        // Descent certificate of the projected direction.
        debug_assert!(
            {
                let bound = -metric.inv_norm_sq(&d) / alpha;
                directional <= bound + T::of(1e-8) * (T::one() + bound.abs())
            },
            "descent certificate violated at k={k}"
        );

        let ls = armijo_linesearch(|p| objective.value(p), &x, f, &d, directional, ls_params)?;

        debug_assert!(
            IterateState {
                k,
                x: &x,
                y: &y,
                d: &d,
                alpha,
                lambda: ls.lambda,
                metric: &metric,
            }
            .invariants_hold(region),
            "iterate invariants violated at k={k}"
        );

        for i in 0..n {
            let xi_new = x[i] + ls.lambda * d[i];
            s[i] = xi_new - x[i];
            x[i] = xi_new;
        }
        objective.gradient(&x, &mut grad_new);
        for i in 0..n {
            z[i] = grad_new[i] - grad[i];
        }
        std::mem::swap(&mut grad, &mut grad_new);
        have_secant = true;

        let f_prev = f;
        f = ls.f_new;
        entries.push(IterationEntry {
            k,
            f,
            lambda: ls.lambda,
            alpha,
            direction_norm: d_norm,
            directional,
            mu: metric.mu(),
            seconds: started.elapsed().as_secs_f64(),
        });

        if let Some(eps) = stop.relative_f {
            if (f - f_prev).abs() <= eps * f.abs() {
                termination = Termination::RelativeFChange;
                break;
            }
        }
        if let Some(tol) = stop.residual {
            if residual_from_gradient(&x, &grad, region) <= tol {
                termination = Termination::ResidualTolerance;
                break;
            }
        }
    }

    let record = RunRecord {
        initial_f,
        entries,
        termination,
    };
    debug_assert!(record.is_monotone(), "Armijo run lost monotonicity");
    Ok(SgpOutcome { x, record })
}
