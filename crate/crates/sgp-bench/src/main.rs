use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sgp_bench::config::BenchConfig;
use sgp_bench::error::BenchError;
use sgp_bench::{run_autoparam, run_benchmark, run_groundtruth, run_simulate};

/// Benchmark harness for box-constrained deblurring solvers.
#[derive(Parser)]
#[command(name = "sgp-bench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (flat key = value lines); defaults apply when
    /// omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides problem.seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overrides solver.methods (repeatable): gp, sgp_fixed[:mu],
    /// sgp_summable[:c], custom.
    #[arg(long = "method")]
    methods: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured solver variants and write convergence histories.
    Bench(Common),
    /// Select the regularization parameter by the discrepancy principle.
    Autoparam(Common),
    /// Write the simulated problem (truth, data, PSF) to disk.
    Simulate(Common),
    /// Compute and cache the ground-truth reference minimizer.
    Groundtruth(Common),
}

fn load_config(common: &Common) -> Result<BenchConfig, BenchError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                BenchError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            BenchConfig::parse(&text)?
        }
        None => BenchConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.problem.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    if !common.methods.is_empty() {
        let metric = cfg.solver.metric;
        cfg.solver.methods = common
            .methods
            .iter()
            .map(|m| sgp_bench::config::parse_method(m, metric))
            .collect::<Result<_, _>>()?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Bench(common) => {
            let cfg = load_config(&common)?;
            let report = run_benchmark(&cfg)?;
            println!("reference objective value: {}", report.ground_truth_f);
            for r in &report.runs {
                match &r.result {
                    Ok(s) => println!(
                        "{}: iters_to_gap={} rel_error={} final_f={}",
                        r.name,
                        s.iters_to_gap
                            .map_or("unreached".to_string(), |k| k.to_string()),
                        s.rel_error,
                        s.final_f
                    ),
                    Err(e) => println!("{}: FAILED ({e})", r.name),
                }
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            Ok(report.any_failure())
        }
        Command::Autoparam(common) => {
            let cfg = load_config(&common)?;
            let report = run_autoparam(&cfg)?;
            for r in &report.runs {
                match &r.result {
                    Ok(s) => println!(
                        "{}: k={} k_tot={} nu={} discrepancy={} rel_error={}",
                        r.name, s.secant_steps, s.k_tot, s.nu, s.discrepancy, s.rel_error
                    ),
                    Err(e) => println!("{}: FAILED ({e})", r.name),
                }
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            Ok(report.any_failure())
        }
        Command::Simulate(common) => {
            let cfg = load_config(&common)?;
            for f in run_simulate(&cfg)? {
                println!("wrote {}", f.display());
            }
            Ok(false)
        }
        Command::Groundtruth(common) => {
            let cfg = load_config(&common)?;
            let (cache, f) = run_groundtruth(&cfg)?;
            println!("reference objective value: {f}");
            if let Some(path) = cache {
                println!("cached at {}", path.display());
            }
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
