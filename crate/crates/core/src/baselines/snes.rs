use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, ensure_popsize, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::search::{sample_diagonal, ClipBounds, Population};
use crate::strategy::{best_of, check_sigma0, Strategy};

const SIGMA_FLOOR: f64 = 1e-300;

/// Separable natural evolution strategy (Schaul et al., 2011).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snes {
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
    pub lr_mean: f64,
    pub lr_sigma: f64,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
}

impl Snes {
    pub fn new(m0: &[f64], sigma0: f64) -> Result<Self> {
        check_sigma0(sigma0)?;
        let d = m0.len() as f64;
        Ok(Self {
            mean: m0.to_vec(),
            sigma: vec![sigma0; m0.len()],
            lr_mean: 1.0,
            // (3 + ln d) / (5 sqrt d), the usual SNES default
            lr_sigma: (3.0 + math::ln(d)) / (5.0 * math::sqrt(d)),
            best_fitness: f64::INFINITY,
        })
    }
}

/// Rank-based utilities `max(0, ln(N/2 + 1) - ln k) / sum - 1/N` (k = 1 is
/// the best member). Tied fitness values share the average utility of the
/// ranks they occupy, so a flat landscape gives all-zero utilities.
pub fn snes_utilities(fitness: &[f64]) -> Result<Vec<f64>> {
    ensure_popsize(fitness.len())?;
    let n = fitness.len();
    let raw: Vec<f64> =
        (1..=n).map(|k| (math::ln(n as f64 / 2.0 + 1.0) - math::ln(k as f64)).max(0.0)).collect();
    let total: f64 = raw.iter().sum();
    let by_rank: Vec<f64> = raw.iter().map(|u| u / total - 1.0 / n as f64).collect();

    let order = math::argsort(fitness);
    let mut out = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && fitness[order[end]] == fitness[order[start]] {
            end += 1;
        }
        // A single tie group spanning everything averages to exactly zero.
        let avg = if end - start == n { 0.0 } else { by_rank[start..end].iter().sum::<f64>() / (end - start) as f64 };
        for &i in &order[start..end] {
            out[i] = avg;
        }
        start = end;
    }
    Ok(out)
}

pub fn snes_step(state: &Snes, pop: &Population) -> Result<Snes> {
    let dims = state.mean.len();
    ensure_len(dims, pop.dims())?;
    let sorted = pop.reordered(&pop.canonical_order());
    let u = snes_utilities(&sorted.fitness)?;
    let mut next = state.clone();
    for d in 0..dims {
        let s = state.sigma[d].max(SIGMA_FLOOR);
        let mut g_mean = 0.0;
        let mut g_sigma = 0.0;
        for (j, uj) in u.iter().enumerate() {
            let z = (sorted.candidates[(j, d)] - state.mean[d]) / s;
            g_mean += uj * z;
            g_sigma += uj * (z * z - 1.0);
        }
        next.mean[d] = state.mean[d] + state.lr_mean * state.sigma[d] * g_mean;
        next.sigma[d] = state.sigma[d] * math::exp(0.5 * state.lr_sigma * g_sigma);
    }
    next.best_fitness = best_of(state.best_fitness, &pop.fitness);
    Ok(next)
}

impl Strategy for Snes {
    fn name(&self) -> &'static str {
        "snes"
    }
    fn dims(&self) -> usize {
        self.mean.len()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        sample_diagonal(&self.mean, &self.sigma, rng, popsize, &ClipBounds::default())
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        *self = snes_step(self, pop)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.mean
    }
    fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}
