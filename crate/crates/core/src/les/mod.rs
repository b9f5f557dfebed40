//! Learned evolution strategy.
//!
//! Recombination weights come from self-attention over per-member fitness
//! tokens; per-dimension learning rates come from a small MLP fed with two
//! multi-timescale evolution paths and a timestamp embedding. Both networks
//! are permutation-invariant in the population, so the whole update is too.

mod network;
mod params;

pub use network::{
    attention_weights, lrate_mlp, timestamp_embedding, update_paths, AttentionScale, PathConfig, PathConvention,
    PATH_RATES, TIME_SCALES,
};
pub use params::{param_count, LesParams, DEFAULT_HIDDEN, DEFAULT_KEY_DIM, MLP_INPUT};

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Result};
use crate::search::{fixed_rank_weights, gaussian_update, ClipBounds, Population, SearchState, UpdateWeights};
use crate::shaping::fitness_features;

/// Lower bound on sigma when normalizing displacements for the sigma path.
const NOISE_SIGMA_FLOOR: f64 = 1e-10;

/// Switches that replace a learned component with its hand-crafted counterpart.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesAblation {
    /// Use truncation weights on the best half instead of attention.
    #[serde(default)]
    pub fixed_weights: bool,
    /// Use `alpha_m = 1, alpha_sigma = 0.1` instead of the MLP.
    #[serde(default)]
    pub fixed_lrates: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LesConfig {
    #[serde(default)]
    pub attention_scale: AttentionScale,
    #[serde(default)]
    pub path_convention: PathConvention,
    #[serde(default)]
    pub paths: PathConfig,
    #[serde(default)]
    pub clip: ClipBounds,
    #[serde(default)]
    pub ablation: LesAblation,
}

/// State after a tell, plus the weights and learning rates that produced it.
/// Weights are indexed like the input population.
#[derive(Clone, Debug, PartialEq)]
pub struct LesTrace {
    pub state: SearchState,
    pub weights: UpdateWeights,
}

pub fn les_tell(state: &SearchState, pop: &Population, params: &LesParams, cfg: &LesConfig) -> Result<SearchState> {
    les_tell_traced(state, pop, params, cfg).map(|t| t.state)
}

pub fn les_tell_traced(state: &SearchState, pop: &Population, params: &LesParams, cfg: &LesConfig) -> Result<LesTrace> {
    let dims = state.dims();
    ensure_len(dims, pop.dims())?;
    let order = pop.canonical_order();
    let sorted = pop.reordered(&order);
    let n = sorted.len();

    let w = if cfg.ablation.fixed_weights {
        fixed_rank_weights(&sorted.fitness, 0.5)?
    } else {
        let features = fitness_features(&sorted.fitness, state.best_fitness)?;
        attention_weights(params, &features, cfg.attention_scale)?
    };

    let mut weight_diff = vec![0.0; dims];
    let mut weight_noise = vec![0.0; dims];
    for d in 0..dims {
        let m = state.mean[d];
        let s = state.sigma[d].max(NOISE_SIGMA_FLOOR);
        for j in 0..n {
            let delta = sorted.candidates[(j, d)] - m;
            weight_diff[d] += w[j] * delta;
            weight_noise[d] += w[j] * delta / s;
        }
    }
    let path_c = update_paths(&state.path_c, &weight_diff, &cfg.paths.timescales, cfg.path_convention)?;
    let path_sigma = update_paths(&state.path_sigma, &weight_noise, &cfg.paths.timescales, cfg.path_convention)?;

    let (alpha_m, alpha_sigma): (Vec<f64>, Vec<f64>) = if cfg.ablation.fixed_lrates {
        (vec![1.0; dims], vec![0.1; dims])
    } else {
        let embed = timestamp_embedding(state.gen_counter);
        (0..dims)
            .map(|d| {
                let pc = [path_c[(d, 0)], path_c[(d, 1)], path_c[(d, 2)]];
                let ps = [path_sigma[(d, 0)], path_sigma[(d, 1)], path_sigma[(d, 2)]];
                lrate_mlp(params, &pc, &ps, &embed)
            })
            .unzip()
    };

    let uw = UpdateWeights { w, alpha_m, alpha_sigma };
    let mut next = gaussian_update(state, &sorted, &uw, &cfg.clip)?;
    next.path_c = path_c;
    next.path_sigma = path_sigma;

    let mut original = vec![0.0; n];
    for (r, &i) in order.iter().enumerate() {
        original[i] = uw.w[r];
    }
    Ok(LesTrace { state: next, weights: UpdateWeights { w: original, ..uw } })
}
