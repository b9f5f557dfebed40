use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{chi_n, log_weights};
use crate::error::{ensure_len, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::search::{sample_diagonal, ClipBounds, Population};
use crate::strategy::{best_of, check_sigma0, Strategy};

/// CMA-ES restricted to a diagonal covariance (Ros & Hansen, "A Simple
/// Modification in CMA-ES Achieving Linear Time and Space Complexity", 2008).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SepCmaEs {
    pub mean: Vec<f64>,
    pub sigma: f64,
    /// Diagonal of the covariance matrix.
    pub cov: Vec<f64>,
    pub path_c: Vec<f64>,
    pub path_sigma: Vec<f64>,
    pub generation: u64,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
}

impl SepCmaEs {
    pub fn new(m0: &[f64], sigma0: f64) -> Result<Self> {
        check_sigma0(sigma0)?;
        let n = m0.len();
        Ok(Self {
            mean: m0.to_vec(),
            sigma: sigma0,
            cov: vec![1.0; n],
            path_c: vec![0.0; n],
            path_sigma: vec![0.0; n],
            generation: 0,
            best_fitness: f64::INFINITY,
        })
    }

    /// Per-coordinate standard deviation `sigma * sqrt(c_ii)`.
    pub fn scales(&self) -> Vec<f64> {
        self.cov.iter().map(|c| self.sigma * math::sqrt(*c)).collect()
    }
}

pub fn sepcma_step(state: &SepCmaEs, pop: &Population) -> Result<SepCmaEs> {
    let n = state.mean.len();
    ensure_len(n, pop.dims())?;
    let lambda = pop.len();
    let mu = (lambda / 2).max(1);
    let w = log_weights(mu, lambda);
    let mu_eff = 1.0 / w.iter().map(|x| x * x).sum::<f64>();
    let nf = n as f64;

    let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * (math::sqrt((mu_eff - 1.0) / (nf + 1.0)) - 1.0).max(0.0) + c_sigma;
    let c_c = 4.0 / (nf + 4.0);
    let scale = (nf + 2.0) / 3.0;
    let mut c1 = scale * 2.0 / ((nf + 1.3) * (nf + 1.3) + mu_eff);
    let mut cmu = scale * 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0) * (nf + 2.0) + mu_eff);
    cmu = cmu.max(0.0);
    if c1 + cmu > 1.0 {
        let total = c1 + cmu;
        c1 /= total;
        cmu /= total;
    }

    let sorted = pop.reordered(&pop.canonical_order());
    let y: Vec<Vec<f64>> = (0..mu)
        .map(|j| (0..n).map(|d| (sorted.candidates[(j, d)] - state.mean[d]) / state.sigma).collect())
        .collect();
    let y_w: Vec<f64> = (0..n).map(|d| (0..mu).map(|j| w[j] * y[j][d]).sum()).collect();

    let mut next = state.clone();
    for d in 0..n {
        next.mean[d] = state.mean[d] + state.sigma * y_w[d];
        let inv_sqrt = 1.0 / math::sqrt(state.cov[d]);
        next.path_sigma[d] = (1.0 - c_sigma) * state.path_sigma[d]
            + math::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * y_w[d] * inv_sqrt;
    }
    let ps_norm = math::norm(&next.path_sigma);
    let decay = 1.0 - math::powf(1.0 - c_sigma, 2.0 * (state.generation as f64 + 1.0));
    let h_sigma = if ps_norm / math::sqrt(decay) < (1.4 + 2.0 / (nf + 1.0)) * chi_n(n) { 1.0 } else { 0.0 };
    for d in 0..n {
        next.path_c[d] =
            (1.0 - c_c) * state.path_c[d] + h_sigma * math::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w[d];
        let rank_mu: f64 = (0..mu).map(|j| w[j] * y[j][d] * y[j][d]).sum();
        let correction = (1.0 - h_sigma) * c_c * (2.0 - c_c) * state.cov[d];
        next.cov[d] = (1.0 - c1 - cmu) * state.cov[d]
            + c1 * (next.path_c[d] * next.path_c[d] + correction)
            + cmu * rank_mu;
        next.cov[d] = next.cov[d].max(1e-300);
    }
    next.sigma = state.sigma * math::exp((c_sigma / d_sigma) * (ps_norm / chi_n(n) - 1.0));
    next.generation = state.generation + 1;
    next.best_fitness = best_of(state.best_fitness, &pop.fitness);
    Ok(next)
}

impl Strategy for SepCmaEs {
    fn name(&self) -> &'static str {
        "sepcma"
    }
    fn dims(&self) -> usize {
        self.mean.len()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        sample_diagonal(&self.mean, &self.scales(), rng, popsize, &ClipBounds::default())
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        *self = sepcma_step(self, pop)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.mean
    }
    fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}
