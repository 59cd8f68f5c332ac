//! Grid reports as JSON, CSV or Markdown.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::equation::format_equation;
use crate::harness::grid::GridResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(grid: &GridResult, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(grid)? + "\n"),
        ReportFormat::Csv => csv_report(grid),
        ReportFormat::Markdown => Ok(markdown_report(grid)),
    }
}

fn csv_report(grid: &GridResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["pde", "n", "noise", "successes", "trials", "rate", "mean_seconds"])?;
    for c in &grid.cells {
        w.write_record([
            c.pde.to_string(),
            c.n.to_string(),
            c.noise.to_string(),
            c.successes.to_string(),
            c.trials.to_string(),
            format!("{:.4}", c.success_rate()),
            format!("{:.3}", c.mean_wall_seconds),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn percent(noise: f64) -> String {
    format!("{}%", (noise * 1e4).round() / 1e2)
}

fn dedup(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.iter().any(|o| o.to_bits() == v.to_bits()) {
            out.push(v);
        }
    }
    out
}

fn markdown_report(grid: &GridResult) -> String {
    let mut out = String::new();
    if grid.cells.is_empty() {
        return out;
    }
    let sizes: Vec<usize> = dedup(grid.cells.iter().map(|c| c.n as f64)).into_iter().map(|n| n as usize).collect();
    let noises = dedup(grid.cells.iter().map(|c| c.noise));
    let _ = writeln!(out, "## {} success rate (%)\n", grid.config.pde);
    let _ = write!(out, "| N \\ noise |");
    for s in &noises {
        let _ = write!(out, " {} |", percent(*s));
    }
    out.push('\n');
    out.push_str("|---|");
    out.push_str(&"---|".repeat(noises.len()));
    out.push('\n');
    for n in &sizes {
        let _ = write!(out, "| {n} |");
        for s in &noises {
            match grid.cells.iter().find(|c| c.n == *n && c.noise.to_bits() == s.to_bits()) {
                Some(c) => {
                    let _ = write!(out, " {:.1} |", 100.0 * c.success_rate());
                }
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out, "\n### Recovered equations\n");
    for c in &grid.cells {
        let eq = match &c.consensus {
            Some(m) => format_equation(m, &grid.terms),
            None => "no model".to_string(),
        };
        let _ = writeln!(out, "- N={}, noise={}: `{eq}`", c.n, percent(c.noise));
    }
    out
}
