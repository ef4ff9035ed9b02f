//! Steplength selection: safeguarded scaled Barzilai–Borwein rules with
//! adaptive alternation.

use std::collections::VecDeque;

use crate::error::{invalid_parameter, CoreError};
use crate::metric::DiagonalMetric;
use crate::scalar::Scalar;

/// Safeguards and alternation parameters for the steplength rules.
///
/// Every produced `α_k` lies in `[alpha_min, alpha_max]`; bounded steplengths
/// (together with bounded metric eigenvalues) are what the stationarity
/// theory asks of the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteplengthConfig<T> {
    pub alpha_min: T,
    pub alpha_max: T,
    /// Steplength of the very first iteration (clamped to the safeguards).
    pub alpha_0: T,
    /// Window length for the BB2 minimum (`m_a ≥ 1`).
    pub memory: usize,
    /// Initial alternation threshold, in `(0, 1)`.
    pub tau_0: T,
}

impl<T: Scalar> Default for SteplengthConfig<T> {
    fn default() -> Self {
        Self {
            alpha_min: T::of(1e-5),
            alpha_max: T::of(1e5),
            alpha_0: T::of(1.3),
            memory: 3,
            tau_0: T::of(0.5),
        }
    }
}

impl<T: Scalar> SteplengthConfig<T> {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.alpha_min > T::zero()) || !(self.alpha_min <= self.alpha_max) {
            return Err(invalid_parameter("need 0 < alpha_min <= alpha_max"));
        }
        if !self.alpha_max.is_finite() {
            return Err(invalid_parameter("alpha_max must be finite"));
        }
        if self.memory == 0 {
            return Err(invalid_parameter("BB2 memory must be ≥ 1"));
        }
        if !(self.tau_0 > T::zero() && self.tau_0 < T::one()) {
            return Err(invalid_parameter("tau_0 must lie in (0, 1)"));
        }
        Ok(())
    }

    fn clamp(&self, alpha: T) -> T {
        alpha.max(self.alpha_min).min(self.alpha_max)
    }
}

/// The two scaled Barzilai–Borwein values for a secant pair `(s, z)` and
/// metric `D`:
///
/// ```text
/// α_BB1 = (sᵀD⁻¹D⁻¹s) / (sᵀD⁻¹z)      α_BB2 = (sᵀDz) / (zᵀDDz)
/// ```
///
/// Nonpositive curvature (a denominator or the BB2 numerator `≤ 0`) makes a
/// rule meaningless; it then returns `alpha_max` so the linesearch takes an
/// optimistic long step and corrects. `s = 0` is a degenerate history and an
/// error: the caller should fall back to its previous steplength.
pub fn bb_steplengths<T: Scalar>(
    s: &[T],
    z: &[T],
    metric: &DiagonalMetric<T>,
    alpha_max: T,
) -> Result<(T, T), CoreError> {
    if s.len() != z.len() || s.len() != metric.dimension() {
        return Err(CoreError::DimensionMismatch {
            expected: metric.dimension(),
            got: s.len(),
        });
    }
    if s.iter().all(|&v| v == T::zero()) {
        return Err(CoreError::DegenerateHistory);
    }

    let d = metric.entries();
    let mut num1 = T::zero(); // sᵀ D⁻¹ D⁻¹ s
    let mut den1 = T::zero(); // sᵀ D⁻¹ z
    let mut num2 = T::zero(); // sᵀ D z
    let mut den2 = T::zero(); // zᵀ D D z
    for i in 0..s.len() {
        let (si, zi, di) = (s[i], z[i], d[i]);
        num1 += si * si / (di * di);
        den1 += si * zi / di;
        num2 += si * zi * di;
        den2 += zi * zi * di * di;
    }

    let bb1 = if den1 > T::zero() {
        num1 / den1
    } else {
        alpha_max
    };
    let bb2 = if den2 > T::zero() && num2 > T::zero() {
        num2 / den2
    } else {
        alpha_max
    };
    Ok((bb1, bb2))
}

/// Supplies `α_k ∈ [alpha_min, alpha_max]` to the solver loop.
///
/// The solver calls [`initial_alpha`](SteplengthRule::initial_alpha) once,
/// then [`next_alpha`](SteplengthRule::next_alpha) with the secant pair of
/// the step just taken: `s = x(k) - x(k-1)`, `z = ∇f(x(k)) - ∇f(x(k-1))`,
/// and the metric `D_k` of the upcoming iteration.
pub trait SteplengthRule<T: Scalar> {
    fn initial_alpha(&mut self, metric: &DiagonalMetric<T>) -> T;
    fn next_alpha(&mut self, s: &[T], z: &[T], metric: &DiagonalMetric<T>) -> T;
}

/// A fixed steplength (plain GP with constant α).
#[derive(Debug, Clone, Copy)]
pub struct ConstantSteplength<T>(pub T);

impl<T: Scalar> SteplengthRule<T> for ConstantSteplength<T> {
    fn initial_alpha(&mut self, _metric: &DiagonalMetric<T>) -> T {
        self.0
    }

    fn next_alpha(&mut self, _s: &[T], _z: &[T], _metric: &DiagonalMetric<T>) -> T {
        self.0
    }
}

/// Adaptive alternation of the scaled BB rules.
///
/// When `α_BB2 / α_BB1 ≤ τ` the two values are far apart: the rule returns
/// the minimum of the last `m_a` BB2 values and shrinks `τ` by 0.9,
/// otherwise it returns BB1 and grows `τ` by 1.1. Identical histories yield
/// identical sequences; there is no internal randomness.
#[derive(Debug, Clone)]
pub struct BbAlternation<T> {
    config: SteplengthConfig<T>,
    tau: T,
    prev_alpha: T,
    bb2_window: VecDeque<T>,
}

impl<T: Scalar> BbAlternation<T> {
    pub fn new(config: SteplengthConfig<T>) -> Result<Self, CoreError> {
        config.validate()?;
        Ok(Self {
            tau: config.tau_0,
            prev_alpha: config.clamp(config.alpha_0),
            bb2_window: VecDeque::with_capacity(config.memory),
            config,
        })
    }

    pub fn config(&self) -> &SteplengthConfig<T> {
        &self.config
    }
}

impl<T: Scalar> SteplengthRule<T> for BbAlternation<T> {
    fn initial_alpha(&mut self, _metric: &DiagonalMetric<T>) -> T {
        self.prev_alpha = self.config.clamp(self.config.alpha_0);
        self.prev_alpha
    }

    fn next_alpha(&mut self, s: &[T], z: &[T], metric: &DiagonalMetric<T>) -> T {
        let (bb1, bb2) = match bb_steplengths(s, z, metric, self.config.alpha_max) {
            Ok(pair) => pair,
            // Zero point difference: keep the previous steplength.
            Err(_) => return self.prev_alpha,
        };
        let bb1 = self.config.clamp(bb1);
        let bb2 = self.config.clamp(bb2);

        if self.bb2_window.len() == self.config.memory {
            self.bb2_window.pop_front();
        }
        self.bb2_window.push_back(bb2);

        let alpha = if bb2 / bb1 <= self.tau {
            self.tau *= T::of(0.9);
            self.bb2_window
                .iter()
                .copied()
                .fold(T::infinity(), T::min)
        } else {
            self.tau *= T::of(1.1);
            bb1
        };
        self.prev_alpha = self.config.clamp(alpha);
        self.prev_alpha
    }
}
