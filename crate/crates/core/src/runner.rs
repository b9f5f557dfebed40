//! Single-strategy optimization loop with per-generation statistics.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::math;
use crate::rng;
use crate::search::Population;
use crate::strategy::Strategy;
use crate::tasks::Objective;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_so_far: f64,
    pub gen_best: f64,
    pub gen_mean: f64,
}

/// Seeds for generation `g` of a run keyed by `seed`: one for sampling and
/// one for evaluation noise.
pub fn generation_seeds(seed: u64, g: usize) -> (u64, u64) {
    (rng::derive(seed, &[0, g as u64]), rng::derive(seed, &[1, g as u64]))
}

/// Non-finite fitness disqualifies the candidate rather than the run.
pub fn sanitize(fitness: &mut [f64]) {
    for f in fitness.iter_mut() {
        if !f.is_finite() {
            *f = f64::INFINITY;
        }
    }
}

/// Runs `generations` ask/evaluate/tell rounds and reports statistics
/// after each one.
pub fn evolve(
    strategy: &mut dyn Strategy,
    objective: &dyn Objective,
    popsize: usize,
    generations: usize,
    seed: u64,
) -> Result<Vec<GenerationStats>> {
    let mut out = Vec::with_capacity(generations);
    let mut best = f64::INFINITY;
    for g in 0..generations {
        let (ask_seed, eval_seed) = generation_seeds(seed, g);
        let x = strategy.ask(&mut rng::stream(ask_seed), popsize)?;
        let mut f = objective.evaluate(&x, eval_seed)?;
        sanitize(&mut f);
        let gen_best = f.iter().copied().fold(f64::INFINITY, f64::min);
        best = best.min(gen_best);
        out.push(GenerationStats { generation: g, best_so_far: best, gen_best, gen_mean: math::mean(&f) });
        strategy.tell(&Population::new(x, f)?)?;
    }
    Ok(out)
}
