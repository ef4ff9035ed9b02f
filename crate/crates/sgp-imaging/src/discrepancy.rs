//! Discrepancy-principle selection of the regularization parameter.
//!
//! Chooses `ν` so that `D_A(x_ν) = (2/n) KL(x_ν)` hits a target `η` close
//! to 1. Each trial `ν` costs a full regularized solve, so the outer loop is
//! a bracketed secant with bisection fallback, warm-starting every inner
//! solve from the previous reconstruction.

use std::time::Instant;

use sgp_core::{Scalar, StoppingRule};

use crate::blur::LinearOperator;
use crate::error::{domain, ImagingError};
use crate::hs::HsRegularizer;
use crate::kl::{kl_value, PoissonModel};
use crate::method::{solve_composite, MethodSpec};

/// Targets and tolerances of the outer search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyConfig<T> {
    /// Discrepancy target `η`.
    pub eta: T,
    /// Relative f-change tolerance `ε` of the inner solves.
    pub eps_inner: T,
    /// Primary acceptance: `|D_A - η| ≤ ε₁`.
    pub eps1: T,
    /// Stall acceptance: `|ν_k - ν_{k-1}| ≤ ε₂ ν_k` together with
    /// `|D_A - η| ≤ 10 ε₁`.
    pub eps2: T,
    /// Iteration cap of each inner solve.
    pub max_inner: usize,
    /// Cap on secant steps after bracketing.
    pub max_outer: usize,
    /// Initial bracket, expanded geometrically if it does not straddle `η`.
    pub nu_lo: T,
    pub nu_hi: T,
}

impl<T: Scalar> Default for DiscrepancyConfig<T> {
    fn default() -> Self {
        Self {
            eta: T::one(),
            eps_inner: T::of(5e-8),
            eps1: T::of(5e-4),
            eps2: T::of(5e-3),
            max_inner: 5000,
            max_outer: 40,
            nu_lo: T::of(1e-6),
            nu_hi: T::one(),
        }
    }
}

/// Bracket expansion factor and cap.
const EXPANSION_FACTOR: f64 = 10.0;
const MAX_EXPANSIONS: usize = 12;

impl<T: Scalar> DiscrepancyConfig<T> {
    pub fn validate(&self) -> Result<(), ImagingError> {
        if !(self.eta > T::zero())
            || !(self.eps_inner > T::zero())
            || !(self.eps1 > T::zero())
            || !(self.eps2 > T::zero())
        {
            return Err(domain("discrepancy tolerances must be positive"));
        }
        if !(self.nu_lo > T::zero()) || !(self.nu_lo < self.nu_hi) {
            return Err(domain("need 0 < nu_lo < nu_hi"));
        }
        if self.max_inner == 0 || self.max_outer == 0 {
            return Err(domain("iteration caps must be positive"));
        }
        Ok(())
    }
}

/// `(2/n) KL(x)`, the quantity driven to `η`.
pub fn discrepancy_value<T: Scalar, A: LinearOperator<T>>(
    model: &PoissonModel<T, A>,
    x: &[T],
) -> Result<T, ImagingError> {
    let n = T::from_usize(model.pixels()).expect("pixel count fits scalar");
    Ok(T::of(2.0) / n * kl_value(model, x)?)
}

/// One inner solve at a fixed `ν`.
#[derive(Debug, Clone)]
pub struct NuEvaluation<T, S> {
    pub solution: S,
    pub discrepancy: T,
    pub objective: T,
    pub inner_iterations: usize,
}

/// The inner problem the outer loop drives: solve at a given `ν` from a
/// warm start and report the discrepancy there.
pub trait NuProblem<T: Scalar> {
    type Solution: Clone;

    fn initial_solution(&self) -> Self::Solution;

    fn solve(
        &mut self,
        nu: T,
        warm: &Self::Solution,
    ) -> Result<NuEvaluation<T, Self::Solution>, ImagingError>;
}

/// One row of the outer trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterStep<T> {
    /// 1-based outer evaluation index (bracketing included).
    pub index: usize,
    pub nu: T,
    pub discrepancy: T,
    pub inner_iterations: usize,
    pub objective: T,
    pub seconds: f64,
}

/// Which stopping predicate accepted the final iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopPredicate {
    /// `|D_A - η| ≤ ε₁`.
    DiscrepancyWithinEps1,
    /// `|ν_k - ν_{k-1}| ≤ ε₂ ν_k` and `|D_A - η| ≤ 10 ε₁`.
    NuStallWithinTenEps1,
}

#[derive(Debug, Clone)]
pub struct DiscrepancyOutcome<T, S> {
    pub nu: T,
    pub solution: S,
    pub discrepancy: T,
    pub predicate: StopPredicate,
    /// Every outer evaluation, bracket expansions included.
    pub trace: Vec<OuterStep<T>>,
    /// Evaluations performed after the bracket was established.
    pub secant_steps: usize,
    /// Sum of inner iterations over all outer steps.
    pub total_inner_iterations: usize,
}

struct Driver<'p, T: Scalar, P: NuProblem<T>> {
    problem: &'p mut P,
    warm: P::Solution,
    trace: Vec<OuterStep<T>>,
    total_inner: usize,
    started: Instant,
}

impl<'p, T: Scalar, P: NuProblem<T>> Driver<'p, T, P> {
    fn eval(&mut self, nu: T) -> Result<T, ImagingError> {
        let evaluation = self.problem.solve(nu, &self.warm)?;
        if !evaluation.discrepancy.is_finite() {
            return Err(domain(format!(
                "non-finite discrepancy at nu = {nu}"
            )));
        }
        self.total_inner += evaluation.inner_iterations;
        self.trace.push(OuterStep {
            index: self.trace.len() + 1,
            nu,
            discrepancy: evaluation.discrepancy,
            inner_iterations: evaluation.inner_iterations,
            objective: evaluation.objective,
            seconds: self.started.elapsed().as_secs_f64(),
        });
        self.warm = evaluation.solution;
        Ok(evaluation.discrepancy)
    }

    fn finish(
        self,
        nu: T,
        discrepancy: T,
        predicate: StopPredicate,
        secant_steps: usize,
    ) -> DiscrepancyOutcome<T, P::Solution> {
        DiscrepancyOutcome {
            nu,
            solution: self.warm,
            discrepancy,
            predicate,
            trace: self.trace,
            secant_steps,
            total_inner_iterations: self.total_inner,
        }
    }
}

/// Solves `D_A(x_ν) = η` for `ν`.
///
/// Brackets a sign change of `D_A - η` by geometric expansion of the initial
/// interval, then iterates a secant step on the two most recent evaluations,
/// falling back to bisection whenever the proposal leaves the bracket.
/// Acceptance uses the two-predicate rule of [`DiscrepancyConfig`]; every
/// inner solve warm-starts from the previous reconstruction.
pub fn solve_for_nu<T: Scalar, P: NuProblem<T>>(
    problem: &mut P,
    config: &DiscrepancyConfig<T>,
) -> Result<DiscrepancyOutcome<T, P::Solution>, ImagingError> {
    config.validate()?;
    let eta = config.eta;
    let eps1 = config.eps1;
    let ten_eps1 = T::of(10.0) * eps1;
    let factor = T::of(EXPANSION_FACTOR);

    let mut driver = Driver {
        warm: problem.initial_solution(),
        problem,
        trace: Vec::new(),
        total_inner: 0,
        started: Instant::now(),
    };

    let mut lo = config.nu_lo;
    let mut hi = config.nu_hi;
    let mut d_lo = driver.eval(lo)?;
    if (d_lo - eta).abs() <= eps1 {
        return Ok(driver.finish(lo, d_lo, StopPredicate::DiscrepancyWithinEps1, 0));
    }
    let mut d_hi = driver.eval(hi)?;
    if (d_hi - eta).abs() <= eps1 {
        return Ok(driver.finish(hi, d_hi, StopPredicate::DiscrepancyWithinEps1, 0));
    }

    // Expand geometrically until the endpoints straddle eta.
    let mut expansions = 0;
    let mut shrink_lo = true;
    while (d_lo - eta).signum() == (d_hi - eta).signum() {
        if expansions >= MAX_EXPANSIONS {
            return Err(ImagingError::NoRoot {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
                d_lo: d_lo.to_f64().unwrap_or(f64::NAN),
                d_hi: d_hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        expansions += 1;
        if shrink_lo {
            lo /= factor;
            d_lo = driver.eval(lo)?;
            if (d_lo - eta).abs() <= eps1 {
                return Ok(driver.finish(lo, d_lo, StopPredicate::DiscrepancyWithinEps1, 0));
            }
        } else {
            hi *= factor;
            d_hi = driver.eval(hi)?;
            if (d_hi - eta).abs() <= eps1 {
                return Ok(driver.finish(hi, d_hi, StopPredicate::DiscrepancyWithinEps1, 0));
            }
        }
        shrink_lo = !shrink_lo;
    }

    let sign_lo = (d_lo - eta).signum();
    let (mut nu_prev, mut phi_prev) = (lo, d_lo - eta);
    let (mut nu_cur, mut phi_cur) = (hi, d_hi - eta);

    for step in 1..=config.max_outer {
        // Secant proposal on the last two evaluations; bisection keeps the
        // iterate inside the current sign-change interval.
        let denom = phi_cur - phi_prev;
        let secant = nu_cur - phi_cur * (nu_cur - nu_prev) / denom;
        let nu_next = if secant.is_finite() && secant > lo && secant < hi {
            secant
        } else {
            (lo + hi) / T::of(2.0)
        };

        let d = driver.eval(nu_next)?;
        let phi = d - eta;

        if phi.abs() <= eps1 {
            return Ok(driver.finish(nu_next, d, StopPredicate::DiscrepancyWithinEps1, step));
        }
        if (nu_next - nu_cur).abs() <= config.eps2 * nu_next && phi.abs() <= ten_eps1 {
            return Ok(driver.finish(nu_next, d, StopPredicate::NuStallWithinTenEps1, step));
        }

        if phi.signum() == sign_lo {
            lo = nu_next;
        } else {
            hi = nu_next;
        }
        nu_prev = nu_cur;
        phi_prev = phi_cur;
        nu_cur = nu_next;
        phi_cur = phi;
    }

    Err(ImagingError::OuterLimit {
        steps: config.max_outer,
    })
}

/// The real inner problem: `KL + ν·HS` solved by a chosen SGP variant with
/// the relative f-change rule and an iteration cap.
pub struct KlNuProblem<'m, T, A> {
    model: &'m PoissonModel<T, A>,
    reg: HsRegularizer<T>,
    method: MethodSpec<T>,
    eps_inner: T,
    max_inner: usize,
    x0: Vec<T>,
}

impl<'m, T: Scalar, A: LinearOperator<T>> KlNuProblem<'m, T, A> {
    pub fn new(
        model: &'m PoissonModel<T, A>,
        reg: HsRegularizer<T>,
        method: MethodSpec<T>,
        config: &DiscrepancyConfig<T>,
        x0: Vec<T>,
    ) -> Result<Self, ImagingError> {
        if x0.len() != model.pixels() {
            return Err(domain("starting image does not match the model"));
        }
        Ok(Self {
            model,
            reg,
            method,
            eps_inner: config.eps_inner,
            max_inner: config.max_inner,
            x0,
        })
    }
}

impl<T: Scalar, A: LinearOperator<T>> NuProblem<T> for KlNuProblem<'_, T, A> {
    type Solution = Vec<T>;

    fn initial_solution(&self) -> Vec<T> {
        self.x0.clone()
    }

    fn solve(&mut self, nu: T, warm: &Vec<T>) -> Result<NuEvaluation<T, Vec<T>>, ImagingError> {
        let stop = StoppingRule::max_iters(self.max_inner).or_relative_f_change(self.eps_inner);
        let out = solve_composite(self.model, self.reg, nu, &self.method, &stop, warm)?;
        let discrepancy = discrepancy_value(self.model, &out.x)?;
        Ok(NuEvaluation {
            discrepancy,
            objective: out.record.final_f(),
            inner_iterations: out.record.iterations(),
            solution: out.x,
        })
    }
}
