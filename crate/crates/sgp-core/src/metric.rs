//! Diagonal scaling matrices, eigenvalue-bound schedules and the running
//! product monitor.
//!
//! A metric `D ∈ M_μ` is a symmetric positive definite matrix with all
//! eigenvalues in `[1/μ, μ]`, which for any vector gives the norm sandwich
//! `(1/μ)‖x‖² ≤ ‖x‖²_D ≤ μ‖x‖²`. This crate restricts metrics to diagonal
//! matrices, so membership is a componentwise band constraint and the scaled
//! projection onto a box stays `O(n)`.
//!
//! A [`BoundSchedule`] produces the per-iteration bound `μ_k`. The variable
//! schedule writes `μ_k² = 1 + ζ_k` with `ζ_k ≥ 0` summable (the default is
//! `ζ_k = c/k²`), which drives the metric toward the identity and keeps the
//! running product `θ_k = Π_{j≤k} μ_j²` bounded; [`ThetaMonitor`] tracks
//! `θ_k` in log-space and warns when the increments `ζ_k` stop decreasing,
//! the empirical signature of a non-summable schedule.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid_input, invalid_parameter, CoreError};
use crate::scalar::Scalar;
use crate::vecops;

/// Diagonal positive definite scaling matrix with entries in `[1/mu, mu]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMetric<T> {
    diag: Vec<T>,
    mu: T,
}

impl<T: Scalar> DiagonalMetric<T> {
    /// The identity metric (plain gradient projection).
    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![T::one(); n],
            mu: T::one(),
        }
    }

    /// Builds a metric from explicit entries, checking membership in `M_mu`.
    pub fn new(diag: Vec<T>, mu: T) -> Result<Self, CoreError> {
        if !(mu >= T::one()) || !mu.is_finite() {
            return Err(invalid_parameter("metric bound mu must be finite and ≥ 1"));
        }
        let lo = mu.recip();
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(invalid_input(format!("non-finite metric entry at {i}")));
            }
            if d < lo || d > mu {
                return Err(invalid_input(format!(
                    "metric entry {d} at {i} outside [1/mu, mu] = [{lo}, {mu}]"
                )));
            }
        }
        Ok(Self { diag, mu })
    }

    /// Clamps arbitrary positive suggestions into the band `[1/mu_k, mu_k]`,
    /// the standard way of building `D_k` from a scaling heuristic.
    pub fn clamped(values: &[T], mu: T) -> Result<Self, CoreError> {
        if !(mu >= T::one()) || !mu.is_finite() {
            return Err(invalid_parameter("metric bound mu must be finite and ≥ 1"));
        }
        if !vecops::all_finite(values) {
            return Err(invalid_input("non-finite entries in metric suggestion"));
        }
        let lo = mu.recip();
        let diag = values.iter().map(|&v| v.max(lo).min(mu)).collect();
        Ok(Self { diag, mu })
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    /// The eigenvalue bound `mu` this metric was built with.
    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn entries(&self) -> &[T] {
        &self.diag
    }

    /// `D v`, componentwise.
    pub fn scale(&self, v: &[T], out: &mut [T]) {
        for i in 0..v.len() {
            out[i] = self.diag[i] * v[i];
        }
    }

    /// `‖v‖²_D = vᵀDv`.
    pub fn norm_sq(&self, v: &[T]) -> T {
        v.iter()
            .zip(&self.diag)
            .map(|(&vi, &di)| di * vi * vi)
            .sum()
    }

    /// `‖v‖²_{D⁻¹} = vᵀD⁻¹v`.
    pub fn inv_norm_sq(&self, v: &[T]) -> T {
        v.iter()
            .zip(&self.diag)
            .map(|(&vi, &di)| vi * vi / di)
            .sum()
    }
}

/// Per-iteration eigenvalue bounds `μ_k ≥ 1` for the scaling matrices.
#[derive(Clone)]
pub enum BoundSchedule<T> {
    /// Constant bound `μ_k = μ` (no decay toward the identity).
    Fixed { mu: T },
    /// `μ_k = √(1 + c/k²)`: the increments `ζ_k = c/k²` are summable.
    Summable { c: T },
    /// User-supplied summable increments: `μ_k = √(1 + ζ(k))`.
    Custom {
        zeta: Arc<dyn Fn(usize) -> T + Send + Sync>,
    },
}

impl<T: fmt::Debug> fmt::Debug for BoundSchedule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed { mu } => f.debug_struct("Fixed").field("mu", mu).finish(),
            Self::Summable { c } => f.debug_struct("Summable").field("c", c).finish(),
            Self::Custom { .. } => f.write_str("Custom { .. }"),
        }
    }
}

impl<T: Scalar> BoundSchedule<T> {
    /// Constant bound; requires `mu ≥ 1`.
    pub fn fixed(mu: T) -> Result<Self, CoreError> {
        if !(mu >= T::one()) || !mu.is_finite() {
            return Err(invalid_parameter("fixed schedule needs finite mu ≥ 1"));
        }
        Ok(Self::Fixed { mu })
    }

    /// `ζ_k = c/k²` schedule; requires `c ≥ 0`.
    pub fn summable(c: T) -> Result<Self, CoreError> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(invalid_parameter("summable schedule needs finite c ≥ 0"));
        }
        Ok(Self::Summable { c })
    }

    /// Schedule from arbitrary increments `ζ(k) ≥ 0`; summability is the
    /// caller's promise, [`ThetaMonitor`] flags empirical violations.
    pub fn custom(zeta: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Self::Custom {
            zeta: Arc::new(zeta),
        }
    }

    /// The increment `ζ_k = μ_k² - 1` for `k ≥ 1`.
    pub fn zeta_at(&self, k: usize) -> Result<T, CoreError> {
        if k < 1 {
            return Err(invalid_parameter("schedule index k must be ≥ 1"));
        }
        let z = match self {
            Self::Fixed { mu } => *mu * *mu - T::one(),
            Self::Summable { c } => {
                let kk = T::from_usize(k).expect("iteration index fits scalar");
                *c / (kk * kk)
            }
            Self::Custom { zeta } => zeta(k),
        };
        Ok(z)
    }

    /// The bound `μ_k` for `k ≥ 1`.
    pub fn mu_at(&self, k: usize) -> Result<T, CoreError> {
        match self {
            Self::Fixed { mu } => {
                if k < 1 {
                    Err(invalid_parameter("schedule index k must be ≥ 1"))
                } else {
                    Ok(*mu)
                }
            }
            _ => Ok((T::one() + self.zeta_at(k)?).sqrt()),
        }
    }

    /// Truncated analytic bound `Σ_{j=1}^{terms} log(1 + ζ_j)` on `log θ_k`.
    ///
    /// For a summable schedule this partial sum converges; `θ_k ≤ exp` of it
    /// for every `k ≤ terms`.
    pub fn log_theta_bound(&self, terms: usize) -> T {
        let mut acc = T::zero();
        for j in 1..=terms {
            let z = self.zeta_at(j).expect("j ≥ 1");
            acc += z.ln_1p();
        }
        acc
    }
}

/// Tracks `θ_k = Π_{j≤k} μ_j²` in log-space.
///
/// Accumulation happens on `log θ` because production schedules start
/// at `μ_1² ≈ 10¹⁰` and a naive product overflows within a few steps. The
/// monitor also watches the increments `ζ_j = μ_j² - 1`: a run of
/// non-decreasing positive increments means the partial sums `Σ ζ_j` have
/// stopped flattening, the empirical signature of a schedule that violates
/// the summability condition.
#[derive(Debug, Clone)]
pub struct ThetaMonitor<T> {
    log_theta: T,
    steps: usize,
    prev_zeta: Option<T>,
    nondecreasing_run: u32,
    flagged: bool,
}

/// Consecutive non-decreasing positive increments before the monitor warns.
const WARN_RUN: u32 = 5;

impl<T: Scalar> Default for ThetaMonitor<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> ThetaMonitor<T> {
    pub fn new() -> Self {
        Self {
            log_theta: T::zero(),
            steps: 0,
            prev_zeta: None,
            nondecreasing_run: 0,
            flagged: false,
        }
    }

    /// Folds in the bound `μ_k ≥ 1` of the next iteration.
    pub fn update(&mut self, mu_k: T) {
        debug_assert!(mu_k >= T::one());
        let mu_sq = mu_k * mu_k;
        self.log_theta += mu_sq.ln();
        self.steps += 1;

        let zeta = mu_sq - T::one();
        if let Some(prev) = self.prev_zeta {
            if zeta > T::zero() && zeta >= prev {
                self.nondecreasing_run += 1;
                if self.nondecreasing_run >= WARN_RUN {
                    self.flagged = true;
                }
            } else {
                self.nondecreasing_run = 0;
            }
        }
        self.prev_zeta = Some(zeta);
    }

    /// `log θ_k` after `steps()` updates.
    pub fn log_theta(&self) -> T {
        self.log_theta
    }

    /// `θ_k` itself; may overflow to `+∞` for divergent schedules.
    pub fn theta(&self) -> T {
        self.log_theta.exp()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// True once the increments `ζ_k` have stopped decreasing, i.e. the
    /// schedule looks non-summable and `θ_k` is growing without bound.
    pub fn summability_warning(&self) -> bool {
        self.flagged
    }
}

/// Produces the scaling matrix `D_k ∈ M_{μ_k}` for each iteration.
///
/// Called once per iteration with the schedule index `k ≥ 1`, the current
/// iterate and its gradient.
pub trait MetricProvider<T: Scalar> {
    fn metric_at(&mut self, k: usize, x: &[T], grad: &[T]) -> DiagonalMetric<T>;
}

/// Always returns the identity: SGP degenerates to plain GP.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMetric;

impl<T: Scalar> MetricProvider<T> for IdentityMetric {
    fn metric_at(&mut self, _k: usize, x: &[T], _grad: &[T]) -> DiagonalMetric<T> {
        DiagonalMetric::identity(x.len())
    }
}

/// Clamps a user-supplied diagonal suggestion into the schedule band
/// `[1/μ_k, μ_k]`.
///
/// The suggestion closure receives `(k, x, ∇f(x))` and returns the raw
/// diagonal entries; anything finite is admissible since the clamp enforces
/// membership in `M_{μ_k}`.
pub struct ClampedDiagonal<T, F> {
    schedule: BoundSchedule<T>,
    suggest: F,
}

impl<T, F> ClampedDiagonal<T, F>
where
    T: Scalar,
    F: FnMut(usize, &[T], &[T]) -> Vec<T>,
{
    pub fn new(schedule: BoundSchedule<T>, suggest: F) -> Self {
        Self { schedule, suggest }
    }

    pub fn schedule(&self) -> &BoundSchedule<T> {
        &self.schedule
    }
}

impl<T, F> MetricProvider<T> for ClampedDiagonal<T, F>
where
    T: Scalar,
    F: FnMut(usize, &[T], &[T]) -> Vec<T>,
{
    fn metric_at(&mut self, k: usize, x: &[T], grad: &[T]) -> DiagonalMetric<T> {
        let mu = self.schedule.mu_at(k).expect("solver passes k ≥ 1");
        let raw = (self.suggest)(k, x, grad);
        DiagonalMetric::clamped(&raw, mu).expect("clamp of finite suggestion")
    }
}
