//! Solver variants for the deblurring problem: plain GP, SGP with fixed
//! metric bounds, and SGP with a summable bound schedule.

use sgp_core::{
    sgp_solve, BbAlternation, BoundSchedule, ConstantSteplength, FeasibleRegion, IdentityMetric,
    LineSearchParams, MetricProvider, SgpOutcome, SteplengthConfig, SteplengthRule, StoppingRule,
};
use sgp_core::Scalar;

use crate::blur::LinearOperator;
use crate::error::ImagingError;
use crate::hs::HsRegularizer;
use crate::kl::PoissonModel;
use crate::objective::CompositeObjective;
use crate::scaling::SplitGradientScaling;

/// Which scaling matrix the iteration uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingMode<T> {
    /// `D_k = I`: plain gradient projection.
    Identity,
    /// Split-gradient scaling with a constant bound `μ_k = μ`.
    Fixed { mu: T },
    /// Split-gradient scaling with `μ_k = √(1 + c/k²)`.
    Summable { c: T },
}

/// Steplength rule selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteplengthSpec<T> {
    /// Adaptive BB alternation.
    Bb(SteplengthConfig<T>),
    /// Constant `α`.
    Constant(T),
}

/// Everything needed to instantiate one solver variant.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec<T> {
    pub scaling: ScalingMode<T>,
    pub steplength: SteplengthSpec<T>,
    pub ls: LineSearchParams<T>,
}

impl<T: Scalar> MethodSpec<T> {
    /// GP with BB steplengths and default linesearch parameters.
    pub fn gp() -> Self {
        Self {
            scaling: ScalingMode::Identity,
            steplength: SteplengthSpec::Bb(SteplengthConfig::default()),
            ls: LineSearchParams::default(),
        }
    }

    /// SGP with the fixed bound `μ = 1e5`.
    pub fn sgp_fixed() -> Self {
        Self {
            scaling: ScalingMode::Fixed { mu: T::of(1e5) },
            ..Self::gp()
        }
    }

    /// SGP with the summable schedule `c = 1e10`.
    pub fn sgp_summable() -> Self {
        Self {
            scaling: ScalingMode::Summable { c: T::of(1e10) },
            ..Self::gp()
        }
    }

    fn metric_provider(
        &self,
        reg: &HsRegularizer<T>,
        nu: T,
    ) -> Result<Box<dyn MetricProvider<T>>, ImagingError> {
        Ok(match self.scaling {
            ScalingMode::Identity => Box::new(IdentityMetric),
            ScalingMode::Fixed { mu } => Box::new(SplitGradientScaling::new(
                *reg,
                nu,
                BoundSchedule::fixed(mu)?,
            )),
            ScalingMode::Summable { c } => Box::new(SplitGradientScaling::new(
                *reg,
                nu,
                BoundSchedule::summable(c)?,
            )),
        })
    }

    fn steplength_rule(&self) -> Result<Box<dyn SteplengthRule<T>>, ImagingError> {
        Ok(match self.steplength {
            SteplengthSpec::Bb(cfg) => Box::new(BbAlternation::new(cfg)?),
            SteplengthSpec::Constant(a) => Box::new(ConstantSteplength(a)),
        })
    }
}

/// Minimizes `KL + ν·HS` over `x ≥ 0` with the given solver variant.
pub fn solve_composite<T: Scalar, A: LinearOperator<T>>(
    model: &PoissonModel<T, A>,
    reg: HsRegularizer<T>,
    nu: T,
    method: &MethodSpec<T>,
    stop: &StoppingRule<T>,
    x0: &[T],
) -> Result<SgpOutcome<T>, ImagingError> {
    let objective = CompositeObjective::new(model, reg, nu)?;
    let region = FeasibleRegion::nonnegative(model.pixels());
    let mut provider = method.metric_provider(&reg, nu)?;
    let mut rule = method.steplength_rule()?;
    let outcome = sgp_solve(
        &objective,
        &region,
        provider.as_mut(),
        rule.as_mut(),
        &method.ls,
        stop,
        x0,
    )?;
    Ok(outcome)
}
