//! Builds the benchmark problems described by a configuration.

use sgp_core::quadratic::SeparableQuadratic;
use sgp_core::{
    FeasibleRegion, LineSearchParams, SmoothObjective, SteplengthConfig,
};
use sgp_imaging::{
    disk_phantom, gaussian_psf, io, simulate_problem, HsRegularizer, Image, MethodSpec,
    NoiseModel, PoissonModel64, ScalingMode, SteplengthSpec,
};

use crate::config::{
    BenchConfig, MetricSpec, NoiseKind, PhantomSpec, ProblemKind, PsfSpec, RhoSpec, StepSpec,
};
use crate::error::{config_error, BenchError};

/// A fully constructed Poisson deblurring instance.
pub struct PoissonProblem {
    pub model: PoissonModel64,
    pub truth: Image<f64>,
    pub reg: HsRegularizer<f64>,
    pub nu: f64,
    /// Background-subtracted data, the standard deconvolution start.
    pub x0: Vec<f64>,
}

/// A quadratic smoke instance with a closed-form reference.
pub struct QuadraticProblem {
    pub objective: SeparableQuadratic<f64>,
    pub region: FeasibleRegion<f64>,
    pub optimum: Vec<f64>,
    pub f_star: f64,
    pub x0: Vec<f64>,
}

pub enum BenchProblem {
    Poisson(PoissonProblem),
    Quadratic(QuadraticProblem),
}

pub fn build_problem(cfg: &BenchConfig) -> Result<BenchProblem, BenchError> {
    match cfg.problem.kind {
        ProblemKind::Poisson => Ok(BenchProblem::Poisson(build_poisson(cfg)?)),
        ProblemKind::Quadratic => Ok(BenchProblem::Quadratic(build_quadratic(cfg))),
    }
}

fn build_poisson(cfg: &BenchConfig) -> Result<PoissonProblem, BenchError> {
    let n = cfg.problem.size;
    let phantom: Image<f64> = match &cfg.problem.phantom {
        PhantomSpec::Disk => disk_phantom(n, n),
        PhantomSpec::Flat => Image::constant(n, n, 1.0),
        PhantomSpec::File(path) => {
            let img = io::read_image(path)?;
            if img.rows() != n || img.cols() != n {
                return Err(config_error(format!(
                    "phantom file is {}x{}, problem.size is {n}",
                    img.rows(),
                    img.cols()
                )));
            }
            img
        }
    };
    let truth = phantom.scaled(cfg.problem.intensity);

    let psf: Image<f64> = match &cfg.problem.psf {
        PsfSpec::Gaussian { variance, side } => gaussian_psf(*side, *variance)?,
        PsfSpec::File(path) => io::read_image(path)?,
    };

    let noise = match cfg.problem.noise {
        NoiseKind::Poisson => NoiseModel::Poisson,
        NoiseKind::None => NoiseModel::None,
    };
    let (model, scaled_truth) = simulate_problem(
        &truth,
        &psf,
        cfg.problem.background,
        cfg.problem.scale,
        cfg.problem.seed,
        noise,
    )?;

    let rho = match cfg.objective.rho {
        RhoSpec::Fixed(r) => r,
        // Data-driven smoothing: rho = 1e-4 * max(g).
        RhoSpec::Auto => 1e-4 * model.data().max(),
    };
    let reg = HsRegularizer::new(n, n, rho)?;

    // Start from the background-subtracted data clamped to the orthant.
    let b = model.background();
    let x0: Vec<f64> = model
        .data()
        .as_slice()
        .iter()
        .map(|&g| (g - b).max(0.0))
        .collect();

    Ok(PoissonProblem {
        model,
        truth: scaled_truth,
        reg,
        nu: cfg.objective.nu,
        x0,
    })
}

fn build_quadratic(cfg: &BenchConfig) -> QuadraticProblem {
    // Deterministic separable quadratic over [0, 1]^n with some targets
    // outside the box so bounds activate.
    let n = cfg.problem.size.min(64);
    let mut h = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        h.push(1.0 + (i % 7) as f64);
        t.push(-0.5 + 2.0 * ((i * 31 % 17) as f64) / 16.0);
    }
    let objective = SeparableQuadratic::new(h, t).unwrap();
    let region = FeasibleRegion::uniform(n, 0.0, 1.0).unwrap();
    let optimum = objective.box_minimizer(region.lower(), region.upper());
    let f_star = objective.value(&optimum);
    QuadraticProblem {
        objective,
        region,
        optimum,
        f_star,
        x0: vec![0.5; n],
    }
}

/// Translates a config metric/steplength selection into a solver variant.
pub fn method_spec(cfg: &BenchConfig, metric: MetricSpec) -> MethodSpec<f64> {
    let scaling = match metric {
        MetricSpec::Identity => ScalingMode::Identity,
        MetricSpec::Fixed { mu } => ScalingMode::Fixed { mu },
        MetricSpec::Summable { c } => ScalingMode::Summable { c },
    };
    let steplength = match cfg.solver.steplength {
        StepSpec::Bb => SteplengthSpec::Bb(SteplengthConfig {
            alpha_min: cfg.solver.alpha_min,
            alpha_max: cfg.solver.alpha_max,
            alpha_0: cfg.solver.alpha0,
            memory: cfg.solver.bb_memory,
            tau_0: cfg.solver.tau0,
        }),
        StepSpec::Constant(a) => SteplengthSpec::Constant(a),
    };
    MethodSpec {
        scaling,
        steplength,
        ls: LineSearchParams {
            beta: cfg.ls.beta,
            delta: cfg.ls.delta,
            max_backtracks: cfg.ls.max_backtracks,
        },
    }
}
