//! Automatic regularization-parameter runs: the discrepancy pipeline per
//! method, with trace CSVs and reconstructions.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use sgp_imaging::{
    io as img_io, solve_for_nu, DiscrepancyConfig, DiscrepancyOutcome, Image, KlNuProblem,
    StopPredicate,
};

use crate::config::{BenchConfig, ProblemKind};
use crate::error::{config_error, BenchError};
use crate::problem::{build_problem, method_spec, BenchProblem};

pub struct AutoMethodRun {
    pub name: String,
    pub result: Result<AutoSummary, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoSummary {
    /// Secant steps after bracketing (the outer `k` of the summary table).
    pub secant_steps: usize,
    /// Total inner iterations over all outer evaluations.
    pub k_tot: usize,
    pub nu: f64,
    pub discrepancy: f64,
    pub rel_error: f64,
    pub wall_seconds: f64,
    pub predicate: StopPredicate,
}

pub struct AutoparamReport {
    pub runs: Vec<AutoMethodRun>,
    pub files: Vec<PathBuf>,
}

impl AutoparamReport {
    pub fn any_failure(&self) -> bool {
        self.runs.iter().any(|r| r.result.is_err())
    }
}

fn discrepancy_config(cfg: &BenchConfig) -> DiscrepancyConfig<f64> {
    DiscrepancyConfig {
        eta: cfg.discrepancy.eta,
        eps_inner: cfg.discrepancy.eps_inner,
        eps1: cfg.discrepancy.eps1,
        eps2: cfg.discrepancy.eps2,
        max_inner: cfg.discrepancy.max_inner,
        max_outer: cfg.discrepancy.max_outer,
        nu_lo: cfg.discrepancy.nu_lo,
        nu_hi: cfg.discrepancy.nu_hi,
    }
}

/// Writes the outer trace in the summary-table layout; works for any
/// solution type, so stub pipelines share the exact same serialization.
pub fn write_trace_csv<S>(
    record_time: bool,
    mut w: impl Write,
    outcome: &DiscrepancyOutcome<f64, S>,
) -> Result<(), BenchError> {
    writeln!(w, "outer_step,nu,discrepancy,inner_iters,f_value,seconds")?;
    for s in &outcome.trace {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            s.index,
            s.nu,
            s.discrepancy,
            s.inner_iterations,
            s.objective,
            if record_time { s.seconds } else { 0.0 }
        )?;
    }
    Ok(())
}

/// Runs the discrepancy-principle pipeline for every configured method.
pub fn run_autoparam(cfg: &BenchConfig) -> Result<AutoparamReport, BenchError> {
    if cfg.problem.kind != ProblemKind::Poisson {
        return Err(config_error("autoparam needs problem.kind = poisson"));
    }
    let problem = match build_problem(cfg)? {
        BenchProblem::Poisson(p) => p,
        BenchProblem::Quadratic(_) => unreachable!("kind checked above"),
    };
    fs::create_dir_all(&cfg.output.dir)?;
    let dconfig = discrepancy_config(cfg);

    let mut runs = Vec::new();
    let mut files = Vec::new();

    for selection in &cfg.solver.methods {
        let spec = method_spec(cfg, selection.metric);
        let started = Instant::now();
        let solved = KlNuProblem::new(&problem.model, problem.reg, spec, &dconfig, problem.x0.clone())
            .map_err(BenchError::from)
            .and_then(|mut p| solve_for_nu(&mut p, &dconfig).map_err(BenchError::from));
        let wall = started.elapsed().as_secs_f64();

        match solved {
            Err(e) => runs.push(AutoMethodRun {
                name: selection.name.clone(),
                result: Err(e.to_string()),
            }),
            Ok(outcome) => {
                let trace_path = cfg
                    .output
                    .dir
                    .join(format!("autoparam_{}.csv", selection.name));
                write_trace_csv(cfg.run.record_time, fs::File::create(&trace_path)?, &outcome)?;
                files.push(trace_path);

                let rows = problem.truth.rows();
                let recon =
                    Image::new(rows, outcome.solution.len() / rows, outcome.solution.clone())
                        .map_err(BenchError::from)?;
                let bin = cfg.output.dir.join(format!("recon_{}.bin", selection.name));
                img_io::write_binary(&bin, &recon)?;
                files.push(bin);
                let pgm = cfg.output.dir.join(format!("recon_{}.pgm", selection.name));
                img_io::write_pgm(&pgm, &recon)?;
                files.push(pgm);

                let diff: f64 = outcome
                    .solution
                    .iter()
                    .zip(problem.truth.as_slice())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let norm: f64 = problem
                    .truth
                    .as_slice()
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt();
                runs.push(AutoMethodRun {
                    name: selection.name.clone(),
                    result: Ok(AutoSummary {
                        secant_steps: outcome.secant_steps,
                        k_tot: outcome.total_inner_iterations,
                        nu: outcome.nu,
                        discrepancy: outcome.discrepancy,
                        rel_error: diff / norm,
                        wall_seconds: if cfg.run.record_time { wall } else { 0.0 },
                        predicate: outcome.predicate,
                    }),
                });
            }
        }
    }

    let summary_path = cfg.output.dir.join("autoparam_summary.csv");
    let mut w = fs::File::create(&summary_path)?;
    writeln!(
        w,
        "method,status,secant_steps,k_tot,nu,discrepancy,rel_error,wall_seconds"
    )?;
    for run in &runs {
        match &run.result {
            Ok(s) => writeln!(
                w,
                "{},ok,{},{},{},{},{},{}",
                run.name, s.secant_steps, s.k_tot, s.nu, s.discrepancy, s.rel_error, s.wall_seconds
            )?,
            Err(e) => writeln!(w, "{},failed,,,,,,{}", run.name, e.replace(',', ";"))?,
        }
    }
    files.push(summary_path);

    Ok(AutoparamReport { runs, files })
}
