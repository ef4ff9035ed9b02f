//! Harness-level behavior: exit codes, file outputs, the quadratic smoke
//! problem, trace pass-through and summary cross-checks.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use sgp_bench::config::BenchConfig;
use sgp_bench::runner::relative_gap;
use sgp_bench::{run_autoparam, run_benchmark, write_trace_csv};
use sgp_imaging::{
    solve_for_nu, DiscrepancyConfig, ImagingError, NuEvaluation, NuProblem,
};

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sgp_cli_{}_{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgp-bench"))
}

#[test]
fn config_errors_exit_with_code_3() {
    let dir = scratch("badcfg");
    let cfg = dir.join("bad.cfg");
    fs::write(&cfg, "problem.sizes = 64\n").unwrap();
    let out = bin()
        .args(["bench", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    // Missing config file is also a configuration error.
    let out = bin()
        .args(["bench", "--config", "/nonexistent/path.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn quadratic_smoke_reaches_tiny_gap_for_all_methods() {
    // Closed-form optimum reference: every method drives the relative gap
    // to 1e-10 or below.
    let dir = scratch("quad");
    let mut cfg = BenchConfig::parse(
        "problem.kind = quadratic\nproblem.size = 16\nrun.max_iters = 2000\nrun.rel_tol = 1e-15\nrun.gap_target = 1e-10\nrun.record_time = false\n",
    )
    .unwrap();
    cfg.output.dir = dir.clone();
    let report = run_benchmark(&cfg).unwrap();
    assert!(!report.any_failure());
    for run in &report.runs {
        let summary = run.result.as_ref().unwrap();
        assert!(
            summary.iters_to_gap.is_some(),
            "{} never reached gap 1e-10",
            run.name
        );
        let gap = relative_gap(summary.final_f, report.ground_truth_f);
        assert!(gap <= 1e-10, "{}: final gap {gap:.3e}", run.name);
        // Reconstruction error against the closed-form box optimum.
        assert!(summary.rel_error <= 1e-6, "{}: rel_error {}", run.name, summary.rel_error);
    }
    assert!(dir.join("summary.csv").exists());
    assert!(dir.join("plotdata.csv").exists());
}

#[test]
fn quadratic_smoke_through_the_binary_exits_zero() {
    let dir = scratch("quadbin");
    let cfg_path = dir.join("quad.cfg");
    fs::write(
        &cfg_path,
        "problem.kind = quadratic\nproblem.size = 12\nrun.max_iters = 1500\nrun.rel_tol = 1e-15\n",
    )
    .unwrap();
    let out = bin()
        .args(["bench", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("history_gp.csv").exists());
}

#[test]
fn simulate_writes_problem_images() {
    let dir = scratch("sim");
    let cfg_path = dir.join("sim.cfg");
    fs::write(
        &cfg_path,
        "problem.size = 16\nproblem.psf = gaussian:2:5\nproblem.seed = 3\n",
    )
    .unwrap();
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for name in ["truth.bin", "data.bin", "psf.bin", "truth.pgm", "data.pgm", "psf.pgm"] {
        assert!(dir.join(name).exists(), "{name} missing");
    }
    // The exact binaries round-trip through the image reader.
    let truth: sgp_imaging::Image<f64> =
        sgp_imaging::io::read_image(&dir.join("truth.bin")).unwrap();
    assert_eq!(truth.rows(), 16);
    assert!(truth.max() > 0.0);
}

#[test]
fn groundtruth_cache_is_reused() {
    let dir = scratch("gt");
    let mut cfg = BenchConfig::parse(
        "problem.size = 16\nproblem.psf = gaussian:2:5\nrun.groundtruth_iters = 60\n",
    )
    .unwrap();
    cfg.output.dir = dir.clone();
    let (path_a, f_a) = sgp_bench::run_groundtruth(&cfg).unwrap();
    let cache = path_a.expect("poisson ground truth is cached");
    assert!(cache.exists());
    let mtime = fs::metadata(&cache).unwrap().modified().unwrap();
    // Second call must load rather than recompute (file untouched).
    let (path_b, f_b) = sgp_bench::run_groundtruth(&cfg).unwrap();
    assert_eq!(Some(cache.clone()), path_b);
    assert_eq!(f_a, f_b);
    assert_eq!(mtime, fs::metadata(&cache).unwrap().modified().unwrap());
}

#[test]
fn stub_trace_passes_through_the_csv_writer() {
    // The CSV layout for a stub pipeline matches solve_for_nu's trace rows
    // one to one.
    struct Stub;
    impl NuProblem<f64> for Stub {
        type Solution = ();
        fn initial_solution(&self) {}
        fn solve(&mut self, nu: f64, _w: &()) -> Result<NuEvaluation<f64, ()>, ImagingError> {
            Ok(NuEvaluation {
                solution: (),
                discrepancy: 2.0 - 1.0 / (1.0 + nu),
                objective: nu,
                inner_iterations: 1,
            })
        }
    }
    let config = DiscrepancyConfig {
        eta: 1.6,
        ..DiscrepancyConfig::default()
    };
    let outcome = solve_for_nu(&mut Stub, &config).unwrap();
    let mut buf = Vec::new();
    write_trace_csv(false, &mut buf, &outcome).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "outer_step,nu,discrepancy,inner_iters,f_value,seconds"
    );
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), outcome.trace.len());
    for (line, step) in body.iter().zip(&outcome.trace) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<usize>().unwrap(), step.index);
        assert_eq!(fields[1].parse::<f64>().unwrap(), step.nu);
        assert_eq!(fields[2].parse::<f64>().unwrap(), step.discrepancy);
        assert_eq!(fields[3].parse::<usize>().unwrap(), step.inner_iterations);
        assert_eq!(fields[5], "0");
    }
}

#[test]
fn autoparam_rel_error_matches_recomputation() {
    // The reported reconstruction error equals an independent recomputation
    // from the written image to 1e-12.
    let dir = scratch("autoerr");
    let mut cfg = BenchConfig::parse(
        "problem.size = 16\nproblem.psf = gaussian:2:5\nsolver.methods = sgp_summable\ndiscrepancy.max_inner = 2000\nrun.record_time = false\n",
    )
    .unwrap();
    cfg.output.dir = dir.clone();
    let report = run_autoparam(&cfg).unwrap();
    assert!(!report.any_failure());
    let summary = report.runs[0].result.as_ref().unwrap();

    // Rebuild the same truth deterministically and recompute the error from
    // the reconstruction on disk.
    let truth = sgp_imaging::disk_phantom::<f64>(16, 16).scaled(cfg.problem.intensity);
    let psf = sgp_imaging::gaussian_psf(5, 2.0).unwrap();
    let (_, scaled_truth) = sgp_imaging::simulate_problem(
        &truth,
        &psf,
        cfg.problem.background,
        cfg.problem.scale,
        cfg.problem.seed,
        sgp_imaging::NoiseModel::Poisson,
    )
    .unwrap();
    let recon: sgp_imaging::Image<f64> =
        sgp_imaging::io::read_binary(&dir.join("recon_sgp_summable.bin")).unwrap();
    let diff: f64 = recon
        .as_slice()
        .iter()
        .zip(scaled_truth.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = scaled_truth.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let recomputed = diff / norm;
    assert!(
        (recomputed - summary.rel_error).abs() <= 1e-12,
        "reported {} vs recomputed {recomputed}",
        summary.rel_error
    );
}

#[test]
fn method_flag_overrides_config() {
    let dir = scratch("flags");
    let cfg_path = dir.join("m.cfg");
    fs::write(
        &cfg_path,
        "problem.kind = quadratic\nproblem.size = 8\nrun.max_iters = 500\nrun.rel_tol = 1e-14\n",
    )
    .unwrap();
    let out = bin()
        .args(["bench", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(&dir)
        .args(["--method", "gp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("history_gp.csv").exists());
    assert!(!dir.join("history_sgp_summable.csv").exists());
}
