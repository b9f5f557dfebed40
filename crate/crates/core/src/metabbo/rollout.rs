use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::les::{les_tell, LesConfig, LesParams};
use crate::matrix::Matrix;
use crate::rng;
use crate::runner::{generation_seeds, sanitize};
use crate::search::{self, init_state, Population};
use crate::tasks::{Objective, TaskSpec};

/// Runs the learned strategy with `params` on `spec` for `generations`
/// rounds of `popsize` evaluations, starting the generation counter at
/// `spec.t0`. Returns every fitness value, one row per generation.
/// Non-finite fitness is recorded as +inf.
pub fn inner_rollout(
    params: &LesParams,
    cfg: &LesConfig,
    spec: &TaskSpec,
    generations: usize,
    popsize: usize,
    seed: u64,
) -> Result<Matrix> {
    spec.validate()?;
    let mut state = init_state(spec.dims, &spec.m0, &vec![spec.sigma0; spec.dims])?;
    state.gen_counter = spec.t0;
    let mut out = Matrix::zeros(generations, popsize);
    for g in 0..generations {
        let (ask_seed, eval_seed) = generation_seeds(seed, g);
        let x = search::ask(&state, &mut rng::stream(ask_seed), popsize, &cfg.clip)?;
        let mut f = spec.evaluate(&x, eval_seed)?;
        sanitize(&mut f);
        out.row_mut(g).copy_from_slice(&f);
        state = les_tell(&state, &Population::new(x, f)?, params, cfg)?;
    }
    Ok(out)
}

/// Runs independent jobs `0..count`. Implementations may run them in any
/// order or in parallel but must return results in index order.
pub trait RolloutExecutor {
    fn map(&self, count: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Result<Vec<f64>>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SequentialExecutor;

impl RolloutExecutor for SequentialExecutor {
    fn map(&self, count: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Result<Vec<f64>> {
        (0..count).map(job).collect()
    }
}
