use anyhow::Result;
use clap::Args;
use les_core::runner::{evolve, GenerationStats};
use les_core::strategy::StrategyKind;
use serde::Serialize;

use super::{load_les, make_strategy, Globals};
use crate::manifest::RunManifest;
use crate::output::{create_csv, num};
use crate::target::Target;

pub const SCHEMA: &str = "evolve/v1";
pub const FILE: &str = "evolve.csv";
pub const COLUMNS: [&str; 4] = ["generation", "best_so_far", "gen_best", "gen_mean"];

#[derive(Args, Clone, Debug, Serialize)]
pub struct EvolveArgs {
    /// les, des, des:<beta>, fixed, openes, pgpe, snes, sepcma or cma
    #[arg(long, default_value = "les")]
    pub strategy: String,
    /// `fn:dims[:noise]` or `circles`
    #[arg(long, default_value = "sphere:2")]
    pub task: String,
    #[arg(long, short = 'T', default_value_t = 100)]
    pub generations: usize,
    #[arg(long, short = 'N', default_value_t = 16)]
    pub popsize: usize,
    /// Initial search scale.
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    /// Learned-strategy checkpoint (zero parameters if omitted).
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
}

pub fn run(args: &EvolveArgs, g: &Globals) -> Result<Vec<GenerationStats>> {
    let kind: StrategyKind = args.strategy.parse()?;
    let target: Target = args.task.parse()?;
    let les = load_les(args.checkpoint.as_deref())?;
    let inst = target.instance(g.seed);
    let mut strategy = make_strategy(kind, &inst.m0, args.sigma0, &les)?;
    let stats = evolve(strategy.as_mut(), inst.objective.as_ref(), args.popsize, args.generations, g.seed)?;

    let dir = g.out_dir()?;
    let mut w = create_csv(&dir.join(FILE), SCHEMA, &COLUMNS.map(String::from))?;
    for s in &stats {
        w.write_record([s.generation.to_string(), num(s.best_so_far), num(s.gen_best), num(s.gen_mean)])?;
    }
    w.flush()?;
    RunManifest::new("evolve", &(args, &inst.spec), vec![g.seed])?.output(FILE).write(dir)?;
    Ok(stats)
}
