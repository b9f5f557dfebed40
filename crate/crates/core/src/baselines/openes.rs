use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::adam::{adam_update, AdamState};
use crate::error::{ensure_len, Result};
use crate::matrix::Matrix;
use crate::search::{sample_diagonal, ClipBounds, Population};
use crate::shaping::centered_rank_averaged;
use crate::strategy::{best_of, check_sigma0, Strategy};

/// OpenAI-style ES: isotropic sampling, centered-rank fitness shaping,
/// Adam on the mean, exponentially decaying scalar sigma.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenEs {
    pub mean: Vec<f64>,
    pub sigma: f64,
    pub sigma_decay: f64,
    pub sigma_min: f64,
    pub adam: AdamState,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
}

impl OpenEs {
    pub const LEARNING_RATE: f64 = 0.05;

    pub fn new(m0: &[f64], sigma0: f64) -> Result<Self> {
        check_sigma0(sigma0)?;
        Ok(Self {
            mean: m0.to_vec(),
            sigma: sigma0,
            sigma_decay: 0.999,
            sigma_min: 0.01,
            adam: AdamState::new(m0.len(), Self::LEARNING_RATE),
            best_fitness: f64::INFINITY,
        })
    }

    /// Search-gradient estimate `1/(N sigma) sum_j shaped_j z_j`.
    pub fn gradient(&self, pop: &Population) -> Result<Vec<f64>> {
        ensure_len(self.mean.len(), pop.dims())?;
        let sorted = pop.reordered(&pop.canonical_order());
        let shaped = centered_rank_averaged(&sorted.fitness)?;
        let n = sorted.len() as f64;
        let mut grad = vec![0.0; self.mean.len()];
        for (d, g) in grad.iter_mut().enumerate() {
            for (j, s) in shaped.iter().enumerate() {
                let z = (sorted.candidates[(j, d)] - self.mean[d]) / self.sigma;
                *g += s * z;
            }
            *g /= n * self.sigma;
        }
        Ok(grad)
    }
}

pub fn openes_step(state: &OpenEs, pop: &Population) -> Result<OpenEs> {
    let grad = state.gradient(pop)?;
    let (delta, adam) = adam_update(&state.adam, &grad)?;
    let mut next = state.clone();
    for (m, d) in next.mean.iter_mut().zip(&delta) {
        *m -= d;
    }
    next.adam = adam;
    next.sigma = (state.sigma * state.sigma_decay).max(state.sigma_min);
    next.best_fitness = best_of(state.best_fitness, &pop.fitness);
    Ok(next)
}

impl Strategy for OpenEs {
    fn name(&self) -> &'static str {
        "openes"
    }
    fn dims(&self) -> usize {
        self.mean.len()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        let sigma = vec![self.sigma; self.mean.len()];
        sample_diagonal(&self.mean, &sigma, rng, popsize, &ClipBounds::default())
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        *self = openes_step(self, pop)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.mean
    }
    fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}
