use anyhow::Result;
use clap::Args;
use les_core::rng;
use les_core::runner::evolve;
use les_core::strategy::StrategyKind;
use rayon::prelude::*;
use serde::Serialize;

use super::{load_les, make_strategy, Globals};
use crate::exec::RayonExecutor;
use crate::manifest::RunManifest;
use crate::output::{create_csv, num};
use crate::target::{parse_list, Target};

pub const SCHEMA: &str = "benchmark/v1";
pub const FILE: &str = "benchmark.csv";
pub const COLUMNS: [&str; 6] = ["strategy", "task", "repeat", "seed", "final_best", "normalized"];

#[derive(Args, Clone, Debug, Serialize)]
pub struct BenchmarkArgs {
    /// Comma-separated strategy names.
    #[arg(long, default_value = "les,des,fixed,openes,pgpe,snes,sepcma")]
    pub strategies: String,
    /// Comma-separated tasks, each `fn:dims[:noise]` or `circles`.
    #[arg(long, default_value = "sphere:2,rosenbrock:2,rastrigin:5")]
    pub tasks: String,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, short = 'T', default_value_t = 100)]
    pub generations: usize,
    #[arg(long, short = 'N', default_value_t = 16)]
    pub popsize: usize,
    /// Initial search scale.
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub strategy: String,
    pub task: String,
    pub repeat: usize,
    pub seed: u64,
    pub final_best: f64,
    pub normalized: f64,
}

/// Min/max normalization of `final_best` within each task, over all
/// strategies and repeats. A task where every run ties maps to 0.
pub fn normalize(rows: &mut [BenchRow]) {
    let tasks: Vec<String> = rows.iter().map(|r| r.task.clone()).collect();
    for task in tasks {
        let vals: Vec<f64> = rows.iter().filter(|r| r.task == task).map(|r| r.final_best).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        for r in rows.iter_mut().filter(|r| r.task == task) {
            r.normalized = if !r.final_best.is_finite() {
                1.0
            } else if hi > lo {
                (r.final_best - lo) / (hi - lo)
            } else {
                0.0
            };
        }
    }
}

pub fn run(args: &BenchmarkArgs, g: &Globals) -> Result<Vec<BenchRow>> {
    let kinds: Vec<StrategyKind> = parse_list(&args.strategies)?;
    let targets: Vec<Target> = parse_list(&args.tasks)?;
    let les = load_les(args.checkpoint.as_deref())?;

    // Every strategy sees the same instance and seed for a given (task, repeat).
    let cells: Vec<(usize, usize, usize)> = (0..kinds.len())
        .flat_map(|s| (0..targets.len()).flat_map(move |t| (0..args.repeats).map(move |r| (s, t, r))))
        .collect();
    let exec = RayonExecutor::new(g.threads)?;
    let finals: Vec<Result<f64>> = exec.install(|| {
        cells
            .par_iter()
            .map(|&(s, t, r)| {
                let seed = rng::derive(g.seed, &[t as u64, r as u64]);
                let inst = targets[t].instance(seed);
                let mut strategy = make_strategy(kinds[s], &inst.m0, args.sigma0, &les)?;
                let stats = evolve(strategy.as_mut(), inst.objective.as_ref(), args.popsize, args.generations, seed)?;
                Ok(stats.last().map_or(f64::INFINITY, |x| x.best_so_far))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(cells.len());
    for (&(s, t, r), f) in cells.iter().zip(finals) {
        rows.push(BenchRow {
            strategy: kinds[s].to_string(),
            task: targets[t].to_string(),
            repeat: r,
            seed: rng::derive(g.seed, &[t as u64, r as u64]),
            final_best: f?,
            normalized: 0.0,
        });
    }
    normalize(&mut rows);

    let dir = g.out_dir()?;
    let mut w = create_csv(&dir.join(FILE), SCHEMA, &COLUMNS.map(String::from))?;
    for r in &rows {
        w.write_record([
            r.strategy.clone(),
            r.task.clone(),
            r.repeat.to_string(),
            r.seed.to_string(),
            num(r.final_best),
            num(r.normalized),
        ])?;
    }
    w.flush()?;
    RunManifest::new("benchmark", args, vec![g.seed])?.output(FILE).write(dir)?;
    Ok(rows)
}
