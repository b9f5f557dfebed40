//! Subcommand implementations. Each takes its parsed arguments plus the
//! global options and writes its outputs and a manifest into `out`.

pub mod benchmark;
pub mod evolve;
pub mod fit_beta;
pub mod inspect;
pub mod train;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use les_core::les::{LesConfig, LesParams};
use les_core::strategy::{build_strategy, BoxedStrategy, StrategyKind};

use crate::checkpoint::Checkpoint;

#[derive(Clone, Debug)]
pub struct Globals {
    pub config: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
    pub threads: usize,
}

impl Globals {
    pub fn out_dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(&self.out)
    }
}

/// Learned-strategy parameters and options from an optional checkpoint;
/// zero parameters and default options otherwise.
pub fn load_les(checkpoint: Option<&Path>) -> Result<(LesParams, LesConfig)> {
    match checkpoint {
        Some(p) => {
            let ck = Checkpoint::load(p)?;
            Ok((ck.params()?, ck.les_config()))
        }
        None => Ok((LesParams::default_zeros(), LesConfig::default())),
    }
}

pub fn make_strategy(kind: StrategyKind, m0: &[f64], sigma0: f64, les: &(LesParams, LesConfig)) -> Result<BoxedStrategy> {
    Ok(build_strategy(kind, m0, sigma0, Some(&les.0), &les.1)?)
}
