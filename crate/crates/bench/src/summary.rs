//! `summarize`: aggregate the per-seed summaries written by `run`.

use crate::config::ExperimentConfig;
use crate::csvio::{parse_float, SUMMARY_HEADER};
use anyhow::{bail, Context};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One experiment directory's aggregate row.
pub struct ExperimentSummary {
    pub dir: PathBuf,
    pub optimizer: String,
    pub objective: String,
    pub seeds: usize,
    pub failed: usize,
    /// Fraction of successful seeds whose final x lies in the global basin,
    /// when the objective has a basin oracle.
    pub success_rate_final: Option<f64>,
    /// Same for the Polyak-Ruppert averaged parameters.
    pub success_rate_averaged: Option<f64>,
    pub mean_final_loss: f64,
    pub min_final_loss: f64,
    pub mean_rescaled_temperature: f64,
}

/// Summarize a single experiment directory (must contain `config.toml` and
/// `summary.csv`) or a directory whose immediate subdirectories are
/// experiments.
pub fn summarize(dir: &Path) -> anyhow::Result<String> {
    let mut experiments = Vec::new();
    if dir.join("config.toml").is_file() {
        experiments.push(summarize_one(dir)?);
    } else {
        let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.join("config.toml").is_file())
            .collect();
        subdirs.sort();
        for sub in subdirs {
            experiments.push(summarize_one(&sub)?);
        }
    }
    if experiments.is_empty() {
        bail!("no experiments found under {} (missing config.toml)", dir.display());
    }
    Ok(render(&experiments))
}

fn summarize_one(dir: &Path) -> anyhow::Result<ExperimentSummary> {
    let config = ExperimentConfig::from_path(&dir.join("config.toml"))?;
    let summary_path = dir.join("summary.csv");
    let text = std::fs::read_to_string(&summary_path)
        .with_context(|| format!("reading {}", summary_path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != SUMMARY_HEADER {
        bail!("{}: unexpected header {header:?}", summary_path.display());
    }

    let file = summary_path.display().to_string();
    let mut seeds = 0;
    let mut failed = 0;
    let mut losses = Vec::new();
    let mut rescaled = Vec::new();
    let mut basin_final = Vec::new();
    let mut basin_avg = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            bail!("{file}: row {row}: expected 8 cells, got {}", cells.len());
        }
        seeds += 1;
        if cells[1] == "failed" {
            failed += 1;
            continue;
        }
        losses.push(parse_float(cells[2], &file, row)?);
        rescaled.push(parse_float(cells[5], &file, row)?);
        match cells[6] {
            "" => {}
            b => basin_final.push(b == "true"),
        }
        match cells[7] {
            "" => {}
            b => basin_avg.push(b == "true"),
        }
    }
    if seeds == 0 {
        bail!("{file}: no runs recorded");
    }

    let rate = |flags: &[bool]| -> Option<f64> {
        if flags.is_empty() {
            None
        } else {
            Some(flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64)
        }
    };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    Ok(ExperimentSummary {
        dir: dir.to_path_buf(),
        optimizer: config.optimizer.name,
        objective: config.objective.name,
        seeds,
        failed,
        success_rate_final: rate(&basin_final),
        success_rate_averaged: rate(&basin_avg),
        mean_final_loss: mean(&losses),
        min_final_loss: losses.iter().cloned().fold(f64::INFINITY, f64::min),
        mean_rescaled_temperature: mean(&rescaled),
    })
}

fn render(experiments: &[ExperimentSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<12} {:<11} {:>5} {:>6} {:>12} {:>12} {:>14} {:>14} {:>16}",
        "dir",
        "optimizer",
        "objective",
        "seeds",
        "failed",
        "success",
        "success_avg",
        "mean_loss",
        "min_loss",
        "mean_resc_temp"
    );
    for e in experiments {
        let _ = writeln!(
            out,
            "{:<24} {:<12} {:<11} {:>5} {:>6} {:>12} {:>12} {:>14.6e} {:>14.6e} {:>16.6e}",
            truncate(&e.dir.display().to_string(), 24),
            e.optimizer,
            e.objective,
            e.seeds,
            e.failed,
            fmt_rate(e.success_rate_final),
            fmt_rate(e.success_rate_averaged),
            e.mean_final_loss,
            e.min_final_loss,
            e.mean_rescaled_temperature,
        );
    }
    for e in experiments {
        if e.success_rate_final.is_none() {
            let _ = writeln!(
                out,
                "note: {} ({}) has no global-basin oracle; success columns omitted",
                e.dir.display(),
                e.objective
            );
        }
    }
    out
}

fn fmt_rate(rate: Option<f64>) -> String {
    match rate {
        Some(r) => format!("{r:.3}"),
        None => "-".into(),
    }
}

fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        s.to_string()
    } else {
        format!("...{}", &s[s.len() - (max - 3)..])
    }
}
