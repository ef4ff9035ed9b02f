//! Per-iteration traces of a solver run.

use crate::scalar::Scalar;

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The projected direction was exactly zero: the iterate is stationary.
    Stationary,
    /// The iteration budget ran out.
    MaxIterations,
    /// `|f(x(k)) - f(x(k-1))| ≤ ε |f(x(k))|` fired.
    RelativeFChange,
    /// The fixed-point stationarity residual dropped below its tolerance.
    ResidualTolerance,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Stationary => "stationary",
            Termination::MaxIterations => "max_iterations",
            Termination::RelativeFChange => "relative_f_change",
            Termination::ResidualTolerance => "residual_tolerance",
        }
    }
}

/// One completed iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationEntry<T> {
    /// Iteration index, starting at 1.
    pub k: usize,
    /// Objective value at the accepted iterate.
    pub f: T,
    /// Accepted Armijo steplength.
    pub lambda: T,
    /// Steplength parameter `α_k` used for the projection.
    pub alpha: T,
    /// `‖d(k)‖₂` of the projected direction.
    pub direction_norm: T,
    /// Descent certificate `∇f(x(k))ᵀd(k)` (negative).
    pub directional: T,
    /// Metric eigenvalue bound `μ_k` of this iteration.
    pub mu: T,
    /// Wall-clock seconds since the run started.
    pub seconds: f64,
}

/// Full trace of a run: initial value, one entry per iteration, and the
/// reason the loop stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<T> {
    pub initial_f: T,
    pub entries: Vec<IterationEntry<T>>,
    pub termination: Termination,
}

impl<T: Scalar> RunRecord<T> {
    pub fn iterations(&self) -> usize {
        self.entries.len()
    }

    /// Objective value after the last accepted iteration.
    pub fn final_f(&self) -> T {
        self.entries.last().map_or(self.initial_f, |e| e.f)
    }

    /// Armijo runs are monotone: `f` never increases across entries.
    pub fn is_monotone(&self) -> bool {
        let mut prev = self.initial_f;
        for e in &self.entries {
            if e.f > prev {
                return false;
            }
            prev = e.f;
        }
        true
    }
}
