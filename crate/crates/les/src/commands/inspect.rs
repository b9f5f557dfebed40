use anyhow::Result;
use clap::Args;
use les_core::les::les_tell_traced;
use les_core::rng;
use les_core::runner::{generation_seeds, sanitize};
use les_core::search::{self, init_state, Population};
use serde::Serialize;

use super::{load_les, Globals};
use crate::manifest::RunManifest;
use crate::output::{create_csv, num};
use crate::target::Target;

pub const SCHEMA: &str = "inspect/v1";
pub const FILE: &str = "inspect.csv";

#[derive(Args, Clone, Debug, Serialize)]
pub struct InspectArgs {
    /// Learned-strategy checkpoint (zero parameters if omitted).
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
    #[arg(long, default_value = "sphere:2")]
    pub task: String,
    #[arg(long, short = 'T', default_value_t = 50)]
    pub generations: usize,
    #[arg(long, short = 'N', default_value_t = 16)]
    pub popsize: usize,
    /// Initial search scale.
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
}

/// One generation of the trace: recombination weights from best to worst
/// member, then per-dimension learning rates.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub weights: Vec<f64>,
    pub alpha_m: Vec<f64>,
    pub alpha_sigma: Vec<f64>,
}

pub fn header(popsize: usize, dims: usize) -> Vec<String> {
    let mut h = vec!["generation".to_string()];
    h.extend((0..popsize).map(|j| format!("w_{j}")));
    h.extend((0..dims).map(|d| format!("alpha_m_{d}")));
    h.extend((0..dims).map(|d| format!("alpha_sigma_{d}")));
    h
}

pub fn run(args: &InspectArgs, g: &Globals) -> Result<Vec<TraceRow>> {
    let target: Target = args.task.parse()?;
    let (params, cfg) = load_les(args.checkpoint.as_deref())?;
    let inst = target.instance(g.seed);
    let dims = inst.m0.len();
    let mut state = init_state(dims, &inst.m0, &vec![args.sigma0; dims])?;

    let mut rows = Vec::with_capacity(args.generations);
    for gen in 0..args.generations {
        let (ask_seed, eval_seed) = generation_seeds(g.seed, gen);
        let x = search::ask(&state, &mut rng::stream(ask_seed), args.popsize, &cfg.clip)?;
        let mut f = inst.objective.evaluate(&x, eval_seed)?;
        sanitize(&mut f);
        let pop = Population::new(x, f)?;
        let trace = les_tell_traced(&state, &pop, &params, &cfg)?;
        let order = pop.canonical_order();
        rows.push(TraceRow {
            generation: gen,
            weights: order.iter().map(|&j| trace.weights.w[j]).collect(),
            alpha_m: trace.weights.alpha_m.clone(),
            alpha_sigma: trace.weights.alpha_sigma.clone(),
        });
        state = trace.state;
    }

    let dir = g.out_dir()?;
    let mut w = create_csv(&dir.join(FILE), SCHEMA, &header(args.popsize, dims))?;
    for r in &rows {
        let mut rec = vec![r.generation.to_string()];
        rec.extend(r.weights.iter().chain(&r.alpha_m).chain(&r.alpha_sigma).map(|v| num(*v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    RunManifest::new("inspect", args, vec![g.seed])?.output(FILE).write(dir)?;
    Ok(rows)
}
