//! Long-format convergence histories for external plotting tools.

use std::io::Write;

use sgp_core::{IterationEntry, RunRecord};

use crate::error::{run_error, BenchError};

/// One plottable row; floats are written with Rust's shortest round-trip
/// formatting, so emit → parse is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub method: String,
    pub k: usize,
    pub f: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub direction_norm: f64,
    pub directional: f64,
    pub mu: f64,
    pub seconds: f64,
}

pub const PLOT_HEADER: &str = "method,k,f,lambda,alpha,direction_norm,directional,mu,seconds";

impl PlotRow {
    pub fn from_entry(method: &str, e: &IterationEntry<f64>, seconds: f64) -> Self {
        Self {
            method: method.to_string(),
            k: e.k,
            f: e.f,
            lambda: e.lambda,
            alpha: e.alpha,
            direction_norm: e.direction_norm,
            directional: e.directional,
            mu: e.mu,
            seconds,
        }
    }
}

/// Flattens records into rows with a stable (method, k) order.
pub fn plot_rows(records: &[(String, RunRecord<f64>)], record_time: bool) -> Vec<PlotRow> {
    let mut rows: Vec<PlotRow> = records
        .iter()
        .flat_map(|(method, record)| {
            record.entries.iter().map(move |e| {
                PlotRow::from_entry(method, e, if record_time { e.seconds } else { 0.0 })
            })
        })
        .collect();
    rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.k.cmp(&b.k)));
    rows
}

pub fn write_plot_rows(mut w: impl Write, rows: &[PlotRow]) -> Result<(), BenchError> {
    writeln!(w, "{PLOT_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.method, r.k, r.f, r.lambda, r.alpha, r.direction_norm, r.directional, r.mu, r.seconds
        )?;
    }
    Ok(())
}

pub fn parse_plot_rows(text: &str) -> Result<Vec<PlotRow>, BenchError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == PLOT_HEADER => {}
        _ => return Err(run_error("plot data missing its header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(run_error(format!("plot row {} malformed", i + 2)));
        }
        let num = |s: &str| -> Result<f64, BenchError> {
            s.parse()
                .map_err(|_| run_error(format!("plot row {}: bad float '{s}'", i + 2)))
        };
        rows.push(PlotRow {
            method: fields[0].to_string(),
            k: fields[1]
                .parse()
                .map_err(|_| run_error(format!("plot row {}: bad index", i + 2)))?,
            f: num(fields[2])?,
            lambda: num(fields[3])?,
            alpha: num(fields[4])?,
            direction_norm: num(fields[5])?,
            directional: num(fields[6])?,
            mu: num(fields[7])?,
            seconds: num(fields[8])?,
        });
    }
    Ok(rows)
}
