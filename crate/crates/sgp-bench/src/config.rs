//! Flat key-value configuration with dotted sections.
//!
//! Every key has a default; unknown keys are rejected so typos fail loudly.
//! The format is line-based `section.key = value` with `#` comments.

use std::path::PathBuf;

use crate::error::{config_error, BenchError};

/// Which test problem the harness builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Poisson,
    Quadratic,
}

/// Ground-truth image selection.
#[derive(Debug, Clone, PartialEq)]
pub enum PhantomSpec {
    /// Piecewise-constant disk phantom.
    Disk,
    /// Constant image (systems tests).
    Flat,
    /// Load from file (binary or PGM).
    File(PathBuf),
}

/// Point-spread function selection.
#[derive(Debug, Clone, PartialEq)]
pub enum PsfSpec {
    /// `gaussian:<variance>:<side>`, truncated and normalized.
    Gaussian { variance: f64, side: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Poisson,
    None,
}

/// Metric schedule selection: `identity | fixed:<mu> | summable:<c>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricSpec {
    Identity,
    Fixed { mu: f64 },
    Summable { c: f64 },
}

/// Steplength rule selection: `bb | constant:<a>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSpec {
    Bb,
    Constant(f64),
}

/// A named solver variant for comparison runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSelection {
    pub name: String,
    pub metric: MetricSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub size: usize,
    pub phantom: PhantomSpec,
    pub psf: PsfSpec,
    pub background: f64,
    pub intensity: f64,
    pub scale: f64,
    pub seed: u64,
    pub noise: NoiseKind,
}

/// Smoothing parameter selection: a number, or `auto` for the
/// data-driven rule `rho = 1e-4 * max(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoSpec {
    Fixed(f64),
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveConfig {
    pub nu: f64,
    pub rho: RhoSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub methods: Vec<MethodSelection>,
    pub metric: MetricSpec,
    pub steplength: StepSpec,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha0: f64,
    pub bb_memory: usize,
    pub tau0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsConfig {
    pub beta: f64,
    pub delta: f64,
    pub max_backtracks: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub max_iters: usize,
    /// 0 disables the relative f-change stop.
    pub rel_tol: f64,
    /// 0 disables the stationarity-residual stop.
    pub residual_tol: f64,
    pub gap_target: f64,
    pub groundtruth_iters: usize,
    /// When false, all `seconds` columns are written as 0 so repeated runs
    /// produce byte-identical files.
    pub record_time: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancySection {
    pub eta: f64,
    pub eps_inner: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub max_inner: usize,
    pub max_outer: usize,
    pub nu_lo: f64,
    pub nu_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub problem: ProblemConfig,
    pub objective: ObjectiveConfig,
    pub solver: SolverConfig,
    pub ls: LsConfig,
    pub run: RunConfig,
    pub discrepancy: DiscrepancySection,
    pub output: OutputConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig {
                kind: ProblemKind::Poisson,
                size: 64,
                phantom: PhantomSpec::Disk,
                psf: PsfSpec::Gaussian {
                    variance: 9.0,
                    side: 33,
                },
                background: 10.0,
                intensity: 500.0,
                scale: 1.0,
                seed: 1,
                noise: NoiseKind::Poisson,
            },
            objective: ObjectiveConfig {
                nu: 0.0415,
                rho: RhoSpec::Fixed(1.0),
            },
            solver: SolverConfig {
                methods: vec![
                    MethodSelection {
                        name: "gp".into(),
                        metric: MetricSpec::Identity,
                    },
                    MethodSelection {
                        name: "sgp_fixed".into(),
                        metric: MetricSpec::Fixed { mu: 1e5 },
                    },
                    MethodSelection {
                        name: "sgp_summable".into(),
                        metric: MetricSpec::Summable { c: 1e10 },
                    },
                ],
                metric: MetricSpec::Summable { c: 1e10 },
                steplength: StepSpec::Bb,
                alpha_min: 1e-5,
                alpha_max: 1e5,
                alpha0: 1.3,
                bb_memory: 3,
                tau0: 0.5,
            },
            ls: LsConfig {
                beta: 1e-4,
                delta: 0.5,
                max_backtracks: 60,
            },
            run: RunConfig {
                max_iters: 5000,
                rel_tol: 0.0,
                residual_tol: 0.0,
                gap_target: 1e-6,
                groundtruth_iters: 1500,
                record_time: true,
            },
            discrepancy: DiscrepancySection {
                eta: 1.0,
                eps_inner: 5e-8,
                eps1: 5e-4,
                eps2: 5e-3,
                max_inner: 5000,
                max_outer: 40,
                nu_lo: 1e-6,
                nu_hi: 1.0,
            },
            output: OutputConfig { dir: "out".into() },
        }
    }
}

/// Parses a method name: `gp`, `sgp_fixed[:mu]`, `sgp_summable[:c]`, or
/// `custom` (which uses `solver.metric`).
pub fn parse_method(name: &str, default_metric: MetricSpec) -> Result<MethodSelection, BenchError> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let metric = match (base, arg) {
        ("gp", None) => MetricSpec::Identity,
        ("sgp_fixed", None) => MetricSpec::Fixed { mu: 1e5 },
        ("sgp_fixed", Some(a)) => MetricSpec::Fixed {
            mu: parse_f64("method sgp_fixed", a)?,
        },
        ("sgp_summable", None) => MetricSpec::Summable { c: 1e10 },
        ("sgp_summable", Some(a)) => MetricSpec::Summable {
            c: parse_f64("method sgp_summable", a)?,
        },
        ("custom", None) => default_metric,
        _ => {
            return Err(config_error(format!(
                "unknown method '{name}' (expected gp, sgp_fixed[:mu], sgp_summable[:c], custom)"
            )))
        }
    };
    Ok(MethodSelection {
        name: name.replace(':', "_"),
        metric,
    })
}

fn parse_metric(value: &str) -> Result<MetricSpec, BenchError> {
    if value == "identity" {
        return Ok(MetricSpec::Identity);
    }
    if let Some(rest) = value.strip_prefix("fixed:") {
        return Ok(MetricSpec::Fixed {
            mu: parse_f64("solver.metric", rest)?,
        });
    }
    if let Some(rest) = value.strip_prefix("summable:") {
        return Ok(MetricSpec::Summable {
            c: parse_f64("solver.metric", rest)?,
        });
    }
    Err(config_error(format!(
        "bad metric '{value}' (expected identity | fixed:<mu> | summable:<c>)"
    )))
}

fn parse_step(value: &str) -> Result<StepSpec, BenchError> {
    if value == "bb" {
        return Ok(StepSpec::Bb);
    }
    if let Some(rest) = value.strip_prefix("constant:") {
        return Ok(StepSpec::Constant(parse_f64("solver.steplength", rest)?));
    }
    Err(config_error(format!(
        "bad steplength '{value}' (expected bb | constant:<a>)"
    )))
}

fn parse_psf(value: &str) -> Result<PsfSpec, BenchError> {
    if let Some(rest) = value.strip_prefix("gaussian:") {
        let mut parts = rest.split(':');
        let variance = parse_f64(
            "problem.psf",
            parts.next().ok_or_else(|| config_error("psf needs a variance"))?,
        )?;
        let side = parse_usize(
            "problem.psf",
            parts.next().ok_or_else(|| config_error("psf needs a side"))?,
        )?;
        if parts.next().is_some() {
            return Err(config_error("psf has too many fields"));
        }
        return Ok(PsfSpec::Gaussian { variance, side });
    }
    if let Some(rest) = value.strip_prefix("file:") {
        return Ok(PsfSpec::File(rest.into()));
    }
    Err(config_error(format!(
        "bad psf '{value}' (expected gaussian:<variance>:<side> | file:<path>)"
    )))
}

fn parse_phantom(value: &str) -> Result<PhantomSpec, BenchError> {
    match value {
        "disk" => Ok(PhantomSpec::Disk),
        "flat" => Ok(PhantomSpec::Flat),
        other => {
            if let Some(rest) = other.strip_prefix("file:") {
                Ok(PhantomSpec::File(rest.into()))
            } else {
                Err(config_error(format!(
                    "bad phantom '{value}' (expected disk | flat | file:<path>)"
                )))
            }
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, BenchError> {
    value
        .trim()
        .parse()
        .map_err(|_| config_error(format!("{key}: '{value}' is not a number")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, BenchError> {
    value
        .trim()
        .parse()
        .map_err(|_| config_error(format!("{key}: '{value}' is not a nonnegative integer")))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, BenchError> {
    value
        .trim()
        .parse()
        .map_err(|_| config_error(format!("{key}: '{value}' is not a nonnegative integer")))
}

fn parse_u32(key: &str, value: &str) -> Result<u32, BenchError> {
    value
        .trim()
        .parse()
        .map_err(|_| config_error(format!("{key}: '{value}' is not a nonnegative integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, BenchError> {
    match value.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(config_error(format!("{key}: expected true or false"))),
    }
}

impl BenchConfig {
    /// Parses the flat key-value text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                config_error(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.apply(key.trim(), value.trim())
                .map_err(|e| config_error(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), BenchError> {
        match key {
            "problem.kind" => {
                self.problem.kind = match value {
                    "poisson" => ProblemKind::Poisson,
                    "quadratic" => ProblemKind::Quadratic,
                    _ => return Err(config_error("expected poisson | quadratic")),
                }
            }
            "problem.size" => self.problem.size = parse_usize(key, value)?,
            "problem.phantom" => self.problem.phantom = parse_phantom(value)?,
            "problem.psf" => self.problem.psf = parse_psf(value)?,
            "problem.background" => self.problem.background = parse_f64(key, value)?,
            "problem.intensity" => self.problem.intensity = parse_f64(key, value)?,
            "problem.scale" => self.problem.scale = parse_f64(key, value)?,
            "problem.seed" => self.problem.seed = parse_u64(key, value)?,
            "problem.noise" => {
                self.problem.noise = match value {
                    "poisson" => NoiseKind::Poisson,
                    "none" => NoiseKind::None,
                    _ => return Err(config_error("expected poisson | none")),
                }
            }
            "objective.nu" => self.objective.nu = parse_f64(key, value)?,
            "objective.rho" => {
                self.objective.rho = if value == "auto" {
                    RhoSpec::Auto
                } else {
                    RhoSpec::Fixed(parse_f64(key, value)?)
                }
            }
            "solver.methods" => {
                let metric = self.solver.metric;
                self.solver.methods = value
                    .split(',')
                    .map(|m| parse_method(m.trim(), metric))
                    .collect::<Result<_, _>>()?;
            }
            "solver.metric" => self.solver.metric = parse_metric(value)?,
            "solver.steplength" => self.solver.steplength = parse_step(value)?,
            "solver.alpha_min" => self.solver.alpha_min = parse_f64(key, value)?,
            "solver.alpha_max" => self.solver.alpha_max = parse_f64(key, value)?,
            "solver.alpha0" => self.solver.alpha0 = parse_f64(key, value)?,
            "solver.bb_memory" => self.solver.bb_memory = parse_usize(key, value)?,
            "solver.tau0" => self.solver.tau0 = parse_f64(key, value)?,
            "ls.beta" => self.ls.beta = parse_f64(key, value)?,
            "ls.delta" => self.ls.delta = parse_f64(key, value)?,
            "ls.max_backtracks" => self.ls.max_backtracks = parse_u32(key, value)?,
            "run.max_iters" => self.run.max_iters = parse_usize(key, value)?,
            "run.rel_tol" => self.run.rel_tol = parse_f64(key, value)?,
            "run.residual_tol" => self.run.residual_tol = parse_f64(key, value)?,
            "run.gap_target" => self.run.gap_target = parse_f64(key, value)?,
            "run.groundtruth_iters" => self.run.groundtruth_iters = parse_usize(key, value)?,
            "run.record_time" => self.run.record_time = parse_bool(key, value)?,
            "discrepancy.eta" => self.discrepancy.eta = parse_f64(key, value)?,
            "discrepancy.eps_inner" => self.discrepancy.eps_inner = parse_f64(key, value)?,
            "discrepancy.eps1" => self.discrepancy.eps1 = parse_f64(key, value)?,
            "discrepancy.eps2" => self.discrepancy.eps2 = parse_f64(key, value)?,
            "discrepancy.max_inner" => self.discrepancy.max_inner = parse_usize(key, value)?,
            "discrepancy.max_outer" => self.discrepancy.max_outer = parse_usize(key, value)?,
            "discrepancy.nu_lo" => self.discrepancy.nu_lo = parse_f64(key, value)?,
            "discrepancy.nu_hi" => self.discrepancy.nu_hi = parse_f64(key, value)?,
            "output.dir" => self.output.dir = value.into(),
            _ => return Err(config_error(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.problem.size == 0 {
            return Err(config_error("problem.size must be positive"));
        }
        if self.problem.background < 0.0 || self.problem.scale <= 0.0 {
            return Err(config_error(
                "problem.background must be >= 0 and problem.scale > 0",
            ));
        }
        if self.objective.nu <= 0.0 {
            return Err(config_error("objective.nu must be positive"));
        }
        if let RhoSpec::Fixed(rho) = self.objective.rho {
            if rho <= 0.0 {
                return Err(config_error("objective.rho must be positive"));
            }
        }
        if self.solver.methods.is_empty() {
            return Err(config_error("solver.methods must not be empty"));
        }
        if self.run.max_iters == 0 || self.run.groundtruth_iters == 0 {
            return Err(config_error("iteration counts must be positive"));
        }
        Ok(())
    }

    /// The canonical string hashed into the ground-truth cache key; covers
    /// everything that changes the reference minimizer.
    pub fn groundtruth_fingerprint(&self) -> String {
        format!(
            "kind={:?};size={};phantom={:?};psf={:?};b={};intensity={};scale={};seed={};noise={:?};nu={};rho={};gt_iters={};alpha=({},{},{},{},{});ls=({},{},{})",
            self.problem.kind,
            self.problem.size,
            self.problem.phantom,
            self.problem.psf,
            self.problem.background,
            self.problem.intensity,
            self.problem.scale,
            self.problem.seed,
            self.problem.noise,
            self.objective.nu,
            match self.objective.rho {
                RhoSpec::Fixed(r) => format!("{r}"),
                RhoSpec::Auto => "auto".to_string(),
            },
            self.run.groundtruth_iters,
            self.solver.alpha_min,
            self.solver.alpha_max,
            self.solver.alpha0,
            self.solver.bb_memory,
            self.solver.tau0,
            self.ls.beta,
            self.ls.delta,
            self.ls.max_backtracks,
        )
    }
}
