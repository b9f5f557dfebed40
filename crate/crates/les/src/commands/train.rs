use std::path::Path;
use std::time::Instant;

use anyhow::Result;
use clap::Args;
use les_core::metabbo::{MetaEsKind, MetaRecord, MetaTrainer};
use serde::Serialize;

use super::Globals;
use crate::checkpoint::Checkpoint;
use crate::config::{ConfigError, FileConfig};
use crate::exec::RayonExecutor;
use crate::manifest::{RunManifest, MANIFEST_FILE};
use crate::runlog::{load_state, save_state, LogWriter, LOG_FILE, STATE_FILE};

pub const BEST_FILE: &str = "best.json";
pub const MEAN_FILE: &str = "mean.json";
pub const TIMING_FILE: &str = "timing.json";

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct TrainArgs {
    /// Continue from the state saved in the output directory.
    #[arg(long)]
    pub resume: bool,
    /// Override the number of meta-generations from the config.
    #[arg(long)]
    pub generations: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
struct Timing {
    seconds: f64,
    generations: usize,
    threads: usize,
}

pub struct TrainOutcome {
    pub log: Vec<MetaRecord>,
    pub trainer: MetaTrainer,
}

/// Loads the config named by `--config`, applying `--seed` when given.
pub fn load_config(g: &Globals, seed_given: bool) -> Result<FileConfig, ConfigError> {
    let path = g.config.as_deref().ok_or(ConfigError::Invalid("--config is required".into()))?;
    let mut cfg = FileConfig::load(path)?;
    if seed_given {
        cfg.meta.seed = g.seed;
    }
    Ok(cfg)
}

pub fn run(
    mut cfg: FileConfig,
    args: &TrainArgs,
    g: &Globals,
    self_referential: bool,
    mut progress: impl FnMut(&MetaRecord),
) -> Result<TrainOutcome> {
    let command = if self_referential { "selfref-train" } else { "meta-train" };
    if self_referential {
        cfg.meta.meta_es = MetaEsKind::SelfReferential;
    }
    if let Some(n) = args.generations {
        cfg.meta.meta_generations = n;
    }
    let dir = g.out_dir()?;
    let state_path = dir.join(STATE_FILE);
    let log_path = dir.join(LOG_FILE);

    let mut trainer = if args.resume && state_path.exists() {
        let mut t = load_state(&state_path)?;
        t.cfg.meta_generations = cfg.meta.meta_generations;
        t
    } else {
        MetaTrainer::new(cfg.meta.clone())?
    };
    let mut writer = if args.resume && log_path.exists() {
        LogWriter::resume(&log_path, trainer.generation)?
    } else {
        LogWriter::create(&log_path)?
    };

    RunManifest::new(command, &cfg, vec![cfg.meta.seed])?
        .output(LOG_FILE)
        .output(BEST_FILE)
        .output(MEAN_FILE)
        .output(STATE_FILE)
        .write(dir)?;

    let exec = RayonExecutor::new(g.threads)?;
    let started = Instant::now();
    let mut log = Vec::new();
    while !trainer.is_done() {
        let rec = trainer.step(&exec)?;
        writer.append(&rec)?;
        save_state(&state_path, &trainer)?;
        write_checkpoints(dir, &trainer)?;
        progress(&rec);
        log.push(rec);
    }
    write_checkpoints(dir, &trainer)?;
    let timing = Timing { seconds: started.elapsed().as_secs_f64(), generations: log.len(), threads: exec.threads() };
    std::fs::write(dir.join(TIMING_FILE), serde_json::to_string_pretty(&timing)? + "\n")?;
    Ok(TrainOutcome { log, trainer })
}

fn write_checkpoints(dir: &Path, trainer: &MetaTrainer) -> Result<()> {
    let out = trainer.outcome(Vec::new())?;
    let les = &trainer.cfg.les;
    Checkpoint::new(&out.best, les).with_manifest(MANIFEST_FILE).save(&dir.join(BEST_FILE))?;
    Checkpoint::new(&out.mean, les).with_manifest(MANIFEST_FILE).save(&dir.join(MEAN_FILE))?;
    Ok(())
}
