//! Scaled gradient projection (SGP) solvers for box-constrained smooth
//! minimization.
//!
//! The method minimizes a continuously differentiable `f` over a box `Ω` by
//! projecting a scaled gradient step onto the box and backtracking along the
//! resulting segment:
//!
//! ```text
//! y(k) = P_Ω( x(k) - α_k D_k ∇f(x(k)) )      (projection in the D_k⁻¹ norm)
//! x(k+1) = x(k) + λ(k) (y(k) - x(k))          (λ(k) from Armijo backtracking)
//! ```
//!
//! The scaling matrix `D_k` is diagonal with eigenvalues confined to
//! `[1/μ_k, μ_k]`. When the bound sequence satisfies `μ_k² = 1 + ζ_k` with
//! `ζ_k` summable, the iterates converge to a minimizer on convex problems
//! and the objective gap decays as `O(1/k)`; [`ThetaMonitor`] tracks the
//! running product `θ_k = Π μ_j²` whose boundedness underpins that result.
//!
//! Main entry points:
//!
//! * [`sgp_solve`] — the iteration loop, generic over the metric provider,
//!   steplength rule and stopping rule; with [`IdentityMetric`] and a
//!   constant steplength it reduces to plain gradient projection.
//! * [`scaled_projection`] / [`descent_direction`] — the projection step and
//!   its descent certificate `∇f(x)ᵀd ≤ -‖d‖²_{D⁻¹}/α`.
//! * [`armijo_linesearch`] — monotone backtracking on `{1, δ, δ², …}`.
//! * [`BbAlternation`] — safeguarded scaled Barzilai–Borwein steplengths
//!   with adaptive alternation.
//!
//! Everything is generic over the scalar type through [`Scalar`]
//! (implemented for `f32` and `f64`); the `*64` aliases at the crate root
//! pin the usual double-precision instantiation.

// Validation uses negated comparisons (`!(x > 0)`) on purpose: they reject
// NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linesearch;
pub mod metric;
pub mod objective;
pub mod quadratic;
pub mod record;
pub mod region;
pub mod scalar;
pub mod solver;
pub mod steplength;

pub(crate) mod vecops;

pub use error::CoreError;
pub use linesearch::{armijo_linesearch, LineSearchParams, LineSearchResult};
pub use metric::{
    BoundSchedule, ClampedDiagonal, DiagonalMetric, IdentityMetric, MetricProvider, ThetaMonitor,
};
pub use objective::{FnObjective, SmoothObjective};
pub use quadratic::{Quadratic, SeparableQuadratic};
pub use record::{IterationEntry, RunRecord, Termination};
pub use region::FeasibleRegion;
pub use scalar::Scalar;
pub use solver::{
    descent_direction, scaled_projection, sgp_solve, stationarity_residual, IterateState,
    SgpOutcome, StoppingRule,
};
pub use steplength::{
    bb_steplengths, BbAlternation, ConstantSteplength, SteplengthConfig, SteplengthRule,
};

/// Double-precision instantiations of the main types.
pub type DiagonalMetric64 = DiagonalMetric<f64>;
pub type BoundSchedule64 = BoundSchedule<f64>;
pub type FeasibleRegion64 = FeasibleRegion<f64>;
pub type LineSearchParams64 = LineSearchParams<f64>;
pub type SteplengthConfig64 = SteplengthConfig<f64>;
pub type StoppingRule64 = StoppingRule<f64>;
pub type RunRecord64 = RunRecord<f64>;
