use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use les_core::des::{fit_des_beta, BetaFit};
use serde::Serialize;

use super::Globals;
use crate::manifest::RunManifest;
use crate::output::read_csv;

pub const FILE: &str = "fit_beta.json";

#[derive(Args, Clone, Debug, Serialize)]
pub struct FitBetaArgs {
    /// Weight trace written by `inspect`.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub beta: f64,
    pub residual: f64,
    pub rows: usize,
    pub popsize: usize,
}

/// Reads the rank-sorted weight columns `w_0..w_{N-1}` of an inspect trace.
pub fn read_weights(path: &std::path::Path) -> Result<Vec<Vec<f64>>> {
    let table = read_csv(path)?;
    let cols: Vec<usize> = (0..).map_while(|j| table.column(&format!("w_{j}"))).collect();
    if cols.len() < 2 {
        bail!("{} has no weight columns w_0, w_1, ...", path.display());
    }
    table
        .rows
        .iter()
        .map(|row| cols.iter().map(|&c| Ok(row[c].parse::<f64>()?)).collect())
        .collect()
}

pub fn run(args: &FitBetaArgs, g: &Globals) -> Result<FitReport> {
    let rows = read_weights(&args.input)?;
    let BetaFit { beta, residual } = fit_des_beta(&rows)?;
    let report = FitReport { beta, residual, rows: rows.len(), popsize: rows[0].len() };
    let dir = g.out_dir()?;
    std::fs::write(dir.join(FILE), serde_json::to_string_pretty(&report)? + "\n")?;
    RunManifest::new("fit-beta", args, vec![])?.output(FILE).write(dir)?;
    Ok(report)
}
