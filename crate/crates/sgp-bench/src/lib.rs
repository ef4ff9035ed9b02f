//! Benchmark harness for the gradient projection deblurring stack: problem
//! construction, solver comparisons (GP, SGP with fixed and with summable
//! metric bounds), discrepancy-principle runs, and CSV reporting.
//!
//! The [`runner`] writes, per method, a convergence history
//! `(k, rel_gap, lambda, alpha, mu, seconds)` against a cached ground-truth
//! reference, plus a summary table; [`autoparam`] drives the ν-selection
//! pipeline and emits its outer trace. With `run.record_time = false` all
//! timing columns are written as zeros and outputs are byte-reproducible.

pub mod autoparam;
pub mod config;
pub mod error;
pub mod plotdata;
pub mod problem;
pub mod runner;

pub use autoparam::{run_autoparam, write_trace_csv, AutoparamReport};
pub use config::BenchConfig;
pub use error::BenchError;
pub use plotdata::{parse_plot_rows, plot_rows, write_plot_rows, PlotRow};
pub use runner::{run_benchmark, run_groundtruth, run_simulate, BenchReport};
