//! Poisson image deblurring on top of the scaled gradient projection core.
//!
//! The model is the classic photon-count inverse problem: observed counts
//! `g ~ Poisson(A x* + b)` with a periodic blur operator `A` (BCCB, FFT
//! products), reconstructed by minimizing the convex composite
//!
//! ```text
//! min_{x ≥ 0}  KL(x) + ν · HS_ρ(x)
//! ```
//!
//! where `KL` is the generalized Kullback–Leibler divergence and `HS_ρ` the
//! hypersurface (smoothed total-variation) regularizer. The module stack:
//!
//! * [`BlurOperator`] / [`DenseBlurOperator`] — FFT convolution and its
//!   dense oracle, both normalized so `A·e = Aᵀ·e = e`,
//! * [`PoissonModel`], [`kl_value`], [`kl_gradient`] — the fit term,
//! * [`HsRegularizer`] — value, gradient and the nonnegative split
//!   `∇HS = V - U` feeding the diagonal scaling,
//! * [`SplitGradientScaling`] / [`build_scaling`] — the per-iteration metric
//!   `D_ii = clamp(x_i / (1 + ν V_i), 1/μ_k, μ_k)`,
//! * [`simulate_problem`] — seeded synthetic phantoms,
//! * [`solve_for_nu`] — discrepancy-principle selection of `ν` by a
//!   bracketed secant over warm-started inner solves,
//! * [`io`] — exact binary images plus 16-bit PGM for viewing.

// Validation uses negated comparisons (`!(x > 0)`) on purpose: they reject
// NaN along with out-of-range values. Index loops over image grids stay
// explicit where the 2-D structure matters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod blur;
pub mod discrepancy;
pub mod error;
pub mod hs;
pub mod image;
pub mod io;
pub mod kl;
pub mod method;
pub mod objective;
pub mod scaling;
pub mod simulate;

pub use blur::{BlurOperator, DenseBlurOperator, LinearOperator};
pub use discrepancy::{
    discrepancy_value, solve_for_nu, DiscrepancyConfig, DiscrepancyOutcome, KlNuProblem,
    NuEvaluation, NuProblem, OuterStep, StopPredicate,
};
pub use error::ImagingError;
pub use hs::HsRegularizer;
pub use image::Image;
pub use kl::{kl_gradient, kl_value, PoissonModel};
pub use method::{solve_composite, MethodSpec, ScalingMode, SteplengthSpec};
pub use objective::CompositeObjective;
pub use scaling::{build_scaling, SplitGradientScaling};
pub use simulate::{disk_phantom, gaussian_psf, simulate_problem, NoiseModel};

/// Double-precision aliases for the common instantiation.
pub type Image64 = Image<f64>;
pub type BlurOperator64 = BlurOperator<f64>;
pub type PoissonModel64 = PoissonModel<f64, BlurOperator<f64>>;
pub type HsRegularizer64 = HsRegularizer<f64>;
pub type MethodSpec64 = MethodSpec<f64>;
pub type DiscrepancyConfig64 = DiscrepancyConfig<f64>;
