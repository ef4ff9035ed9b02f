//! Benchmark driver: ground-truth references, per-method convergence
//! histories, and the summary table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sgp_core::{
    sgp_solve, BbAlternation, BoundSchedule, ClampedDiagonal, ConstantSteplength, IdentityMetric,
    LineSearchParams, RunRecord, SgpOutcome, SteplengthConfig, SteplengthRule,
    StoppingRule,
};
use sgp_imaging::{io as img_io, solve_composite, Image, MethodSpec};

use crate::config::{BenchConfig, MetricSpec, ProblemKind, StepSpec};
use crate::error::{config_error, run_error, BenchError};
use crate::plotdata::{plot_rows, write_plot_rows};
use crate::problem::{build_problem, method_spec, BenchProblem, PoissonProblem, QuadraticProblem};

/// Reference minimizer and objective value for gap measurements.
pub struct GroundTruth {
    pub x: Vec<f64>,
    pub f: f64,
}

/// Outcome of one method's run.
pub struct MethodRun {
    pub name: String,
    pub result: Result<MethodSummary, String>,
    pub record: Option<RunRecord<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    /// First iteration with relative gap at or below the target, if reached.
    pub iters_to_gap: Option<usize>,
    pub wall_seconds: f64,
    /// `‖x - x*‖ / ‖x*‖` against the simulated truth (or box optimum).
    pub rel_error: f64,
    pub final_f: f64,
}

pub struct BenchReport {
    pub ground_truth_f: f64,
    pub runs: Vec<MethodRun>,
    pub files: Vec<PathBuf>,
}

impl BenchReport {
    pub fn any_failure(&self) -> bool {
        self.runs.iter().any(|r| r.result.is_err())
    }
}

/// FNV-1a, stable across platforms and Rust versions (cache keys).
fn fnv1a(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn format_seconds(cfg: &BenchConfig, seconds: f64) -> f64 {
    if cfg.run.record_time {
        seconds
    } else {
        0.0
    }
}

/// Relative (or absolute, for a zero reference) objective gap.
pub fn relative_gap(f: f64, f_ref: f64) -> f64 {
    if f_ref == 0.0 {
        f
    } else {
        (f - f_ref) / f_ref.abs()
    }
}

fn rel_error(x: &[f64], reference: &[f64]) -> f64 {
    let diff: f64 = x
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        diff
    } else {
        diff / norm
    }
}

fn stopping_rule(cfg: &BenchConfig) -> StoppingRule<f64> {
    let mut stop = StoppingRule::max_iters(cfg.run.max_iters);
    if cfg.run.rel_tol > 0.0 {
        stop = stop.or_relative_f_change(cfg.run.rel_tol);
    }
    if cfg.run.residual_tol > 0.0 {
        stop = stop.or_residual_below(cfg.run.residual_tol);
    }
    stop
}

/// Solves the quadratic smoke problem under a metric mode; scaled modes
/// clamp the inverse-curvature (Jacobi) suggestion into the schedule band.
fn solve_quadratic(
    cfg: &BenchConfig,
    problem: &QuadraticProblem,
    metric: MetricSpec,
    stop: &StoppingRule<f64>,
) -> Result<SgpOutcome<f64>, BenchError> {
    let ls = LineSearchParams {
        beta: cfg.ls.beta,
        delta: cfg.ls.delta,
        max_backtracks: cfg.ls.max_backtracks,
    };
    let mut rule: Box<dyn SteplengthRule<f64>> = match cfg.solver.steplength {
        StepSpec::Bb => Box::new(BbAlternation::new(SteplengthConfig {
            alpha_min: cfg.solver.alpha_min,
            alpha_max: cfg.solver.alpha_max,
            alpha_0: cfg.solver.alpha0,
            memory: cfg.solver.bb_memory,
            tau_0: cfg.solver.tau0,
        })?),
        StepSpec::Constant(a) => Box::new(ConstantSteplength(a)),
    };
    let inv_curvature: Vec<f64> = problem.objective.curvatures().iter().map(|h| 1.0 / h).collect();
    let schedule = match metric {
        MetricSpec::Identity => None,
        MetricSpec::Fixed { mu } => Some(BoundSchedule::fixed(mu)?),
        MetricSpec::Summable { c } => Some(BoundSchedule::summable(c)?),
    };
    let out = match schedule {
        None => sgp_solve(
            &problem.objective,
            &problem.region,
            &mut IdentityMetric,
            rule.as_mut(),
            &ls,
            stop,
            &problem.x0,
        )?,
        Some(schedule) => {
            let mut provider =
                ClampedDiagonal::new(schedule, |_k, _x: &[f64], _g: &[f64]| inv_curvature.clone());
            sgp_solve(
                &problem.objective,
                &problem.region,
                &mut provider,
                rule.as_mut(),
                &ls,
                stop,
                &problem.x0,
            )?
        }
    };
    Ok(out)
}

fn cache_paths(cfg: &BenchConfig) -> (PathBuf, PathBuf, String) {
    let fingerprint = cfg.groundtruth_fingerprint();
    let key = format!("{:016x}", fnv1a(&fingerprint));
    let dir = cfg.output.dir.join("cache");
    (
        dir.join(format!("gt_{key}.bin")),
        dir.join(format!("gt_{key}.meta")),
        fingerprint,
    )
}

fn load_cached_truth(
    bin: &Path,
    meta: &Path,
    fingerprint: &str,
) -> Option<GroundTruth> {
    let meta_text = fs::read_to_string(meta).ok()?;
    let mut f_value = None;
    let mut stored_fp = None;
    for line in meta_text.lines() {
        if let Some(v) = line.strip_prefix("f=") {
            f_value = v.parse::<f64>().ok();
        }
        if let Some(v) = line.strip_prefix("fingerprint=") {
            stored_fp = Some(v.to_string());
        }
    }
    if stored_fp.as_deref() != Some(fingerprint) {
        return None;
    }
    let img = img_io::read_binary::<f64>(bin).ok()?;
    Some(GroundTruth {
        x: img.into_vec(),
        f: f_value?,
    })
}

/// Reference minimizer: closed form for quadratics, a long SGP
/// (summable-bound) run for Poisson problems, cached under a fingerprint of
/// the problem definition.
pub fn ground_truth(
    cfg: &BenchConfig,
    problem: &BenchProblem,
) -> Result<(GroundTruth, Option<PathBuf>), BenchError> {
    match problem {
        BenchProblem::Quadratic(q) => Ok((
            GroundTruth {
                x: q.optimum.clone(),
                f: q.f_star,
            },
            None,
        )),
        BenchProblem::Poisson(p) => {
            let (bin, meta, fingerprint) = cache_paths(cfg);
            if let Some(gt) = load_cached_truth(&bin, &meta, &fingerprint) {
                return Ok((gt, Some(bin)));
            }
            let gt = compute_poisson_truth(cfg, p)?;
            fs::create_dir_all(bin.parent().expect("cache path has a parent"))?;
            let rows = p.truth.rows();
            let img = Image::new(rows, gt.x.len() / rows, gt.x.clone())
                .map_err(|e| run_error(e.to_string()))?;
            img_io::write_binary(&bin, &img)?;
            let mut w = fs::File::create(&meta)?;
            writeln!(w, "fingerprint={fingerprint}")?;
            writeln!(w, "f={}", gt.f)?;
            writeln!(w, "iters={}", cfg.run.groundtruth_iters)?;
            Ok((gt, Some(bin)))
        }
    }
}

fn compute_poisson_truth(
    cfg: &BenchConfig,
    p: &PoissonProblem,
) -> Result<GroundTruth, BenchError> {
    // The reference protocol: a long run of SGP with the summable schedule.
    let method = method_spec(
        cfg,
        match cfg.solver.metric {
            MetricSpec::Summable { c } => MetricSpec::Summable { c },
            _ => MetricSpec::Summable { c: 1e10 },
        },
    );
    let stop = StoppingRule::max_iters(cfg.run.groundtruth_iters);
    let out = solve_composite(&p.model, p.reg, p.nu, &method, &stop, &p.x0)?;
    Ok(GroundTruth {
        f: out.record.final_f(),
        x: out.x,
    })
}

fn write_history_csv(
    cfg: &BenchConfig,
    path: &Path,
    record: &RunRecord<f64>,
    f_ref: f64,
) -> Result<(), BenchError> {
    let mut w = fs::File::create(path)?;
    writeln!(w, "k,rel_gap,lambda,alpha,mu,seconds")?;
    for e in &record.entries {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            e.k,
            relative_gap(e.f, f_ref),
            e.lambda,
            e.alpha,
            e.mu,
            format_seconds(cfg, e.seconds)
        )?;
    }
    Ok(())
}

/// Runs every configured method against the reference and writes the
/// per-iteration histories, the summary table and the long-format plot data.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    let problem = build_problem(cfg)?;
    fs::create_dir_all(&cfg.output.dir)?;
    let (gt, _cache) = ground_truth(cfg, &problem)?;
    let stop = stopping_rule(cfg);

    let mut runs = Vec::new();
    let mut files = Vec::new();
    let mut records: Vec<(String, RunRecord<f64>)> = Vec::new();

    for selection in &cfg.solver.methods {
        let started = Instant::now();
        let solved: Result<SgpOutcome<f64>, BenchError> = match &problem {
            BenchProblem::Poisson(p) => {
                let spec: MethodSpec<f64> = method_spec(cfg, selection.metric);
                solve_composite(&p.model, p.reg, p.nu, &spec, &stop, &p.x0)
                    .map_err(BenchError::from)
            }
            BenchProblem::Quadratic(q) => solve_quadratic(cfg, q, selection.metric, &stop),
        };
        let wall = started.elapsed().as_secs_f64();

        match solved {
            Err(e) => runs.push(MethodRun {
                name: selection.name.clone(),
                result: Err(e.to_string()),
                record: None,
            }),
            Ok(out) => {
                // The monotone-decrease invariant guards every file write.
                if !out.record.is_monotone() {
                    runs.push(MethodRun {
                        name: selection.name.clone(),
                        result: Err("run record lost monotonicity".into()),
                        record: Some(out.record),
                    });
                    continue;
                }
                let iters_to_gap = out
                    .record
                    .entries
                    .iter()
                    .find(|e| relative_gap(e.f, gt.f) <= cfg.run.gap_target)
                    .map(|e| e.k);
                let reference = match &problem {
                    BenchProblem::Poisson(p) => p.truth.as_slice().to_vec(),
                    BenchProblem::Quadratic(q) => q.optimum.clone(),
                };
                let summary = MethodSummary {
                    iters_to_gap,
                    wall_seconds: format_seconds(cfg, wall),
                    rel_error: rel_error(&out.x, &reference),
                    final_f: out.record.final_f(),
                };
                let path = cfg
                    .output
                    .dir
                    .join(format!("history_{}.csv", selection.name));
                write_history_csv(cfg, &path, &out.record, gt.f)?;
                files.push(path);
                records.push((selection.name.clone(), out.record.clone()));
                runs.push(MethodRun {
                    name: selection.name.clone(),
                    result: Ok(summary),
                    record: Some(out.record),
                });
            }
        }
    }

    let summary_path = cfg.output.dir.join("summary.csv");
    let mut w = fs::File::create(&summary_path)?;
    writeln!(w, "method,status,iters_to_gap,wall_seconds,rel_error,final_f")?;
    for run in &runs {
        match &run.result {
            Ok(s) => writeln!(
                w,
                "{},ok,{},{},{},{}",
                run.name,
                s.iters_to_gap.map_or(String::new(), |k| k.to_string()),
                s.wall_seconds,
                s.rel_error,
                s.final_f
            )?,
            Err(e) => writeln!(w, "{},failed,,,,{}", run.name, e.replace(',', ";"))?,
        }
    }
    files.push(summary_path);

    let plot_path = cfg.output.dir.join("plotdata.csv");
    let rows = plot_rows(&records, cfg.run.record_time);
    write_plot_rows(fs::File::create(&plot_path)?, &rows)?;
    files.push(plot_path);

    Ok(BenchReport {
        ground_truth_f: gt.f,
        runs,
        files,
    })
}

/// Writes the simulated problem to disk (exact binaries plus PGM views).
pub fn run_simulate(cfg: &BenchConfig) -> Result<Vec<PathBuf>, BenchError> {
    if cfg.problem.kind != ProblemKind::Poisson {
        return Err(config_error("simulate needs problem.kind = poisson"));
    }
    let problem = match build_problem(cfg)? {
        BenchProblem::Poisson(p) => p,
        BenchProblem::Quadratic(_) => unreachable!("kind checked above"),
    };
    fs::create_dir_all(&cfg.output.dir)?;
    let mut written = Vec::new();
    let psf = match &cfg.problem.psf {
        crate::config::PsfSpec::Gaussian { variance, side } => {
            sgp_imaging::gaussian_psf::<f64>(*side, *variance)?
        }
        crate::config::PsfSpec::File(path) => img_io::read_image(path)?,
    };
    for (name, img) in [
        ("truth", &problem.truth),
        ("data", problem.model.data()),
        ("psf", &psf),
    ] {
        let bin = cfg.output.dir.join(format!("{name}.bin"));
        img_io::write_binary(&bin, img)?;
        written.push(bin);
        let pgm = cfg.output.dir.join(format!("{name}.pgm"));
        img_io::write_pgm(&pgm, img)?;
        written.push(pgm);
    }
    Ok(written)
}

/// Computes (or loads) the ground-truth reference and reports where it is
/// cached.
pub fn run_groundtruth(cfg: &BenchConfig) -> Result<(Option<PathBuf>, f64), BenchError> {
    let problem = build_problem(cfg)?;
    fs::create_dir_all(&cfg.output.dir)?;
    let (gt, cache) = ground_truth(cfg, &problem)?;
    Ok((cache, gt.f))
}
