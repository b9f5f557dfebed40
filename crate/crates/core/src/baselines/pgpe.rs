use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::adam::{adam_update, AdamState};
use crate::error::{ensure_len, ensure_popsize, Error, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::rng;
use crate::search::Population;
use crate::shaping::centered_rank_averaged;
use crate::strategy::{best_of, check_sigma0, Strategy};

/// Policy gradients with parameter-based exploration (Sehnke et al., 2010)
/// with symmetric sampling, centered-rank shaping and Adam on the mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pgpe {
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
    pub adam: AdamState,
    pub sigma_lr: f64,
    /// Largest relative change of sigma per step.
    pub max_sigma_change: f64,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
}

/// A mirrored pair `mean +/- eps` with the fitness of each side.
struct Pair {
    eps: Vec<f64>,
    f_plus: f64,
    f_minus: f64,
}

impl Pgpe {
    pub const LEARNING_RATE: f64 = 0.02;

    pub fn new(m0: &[f64], sigma0: f64) -> Result<Self> {
        check_sigma0(sigma0)?;
        Ok(Self {
            mean: m0.to_vec(),
            sigma: vec![sigma0; m0.len()],
            adam: AdamState::new(m0.len(), Self::LEARNING_RATE),
            sigma_lr: 0.1,
            max_sigma_change: 0.2,
            best_fitness: f64::INFINITY,
        })
    }

    /// Recover mirrored pairs from the candidates alone, so the update does
    /// not depend on row order: members are visited in canonical order and
    /// each is matched with the unmatched member closest to its reflection.
    fn pairs(&self, pop: &Population, shaped: &[f64]) -> Vec<Pair> {
        let n = pop.len();
        let order = pop.canonical_order();
        let disp: Vec<Vec<f64>> = (0..n)
            .map(|j| pop.candidates.row(j).iter().zip(&self.mean).map(|(x, m)| x - m).collect())
            .collect();
        let mut used = vec![false; n];
        let mut out = Vec::with_capacity(n / 2);
        for (pos, &a) in order.iter().enumerate() {
            if used[a] {
                continue;
            }
            used[a] = true;
            let mut partner = None;
            let mut best = f64::INFINITY;
            for &b in &order[pos + 1..] {
                if used[b] {
                    continue;
                }
                let gap: f64 = disp[a].iter().zip(&disp[b]).map(|(p, q)| (p + q) * (p + q)).sum();
                if gap < best {
                    best = gap;
                    partner = Some(b);
                }
            }
            let Some(b) = partner else { break };
            used[b] = true;
            let (plus, minus) = match math::lexicographic_cmp(&disp[a], &disp[b]) {
                Ordering::Less => (b, a),
                _ => (a, b),
            };
            let eps = disp[plus].iter().zip(&disp[minus]).map(|(p, q)| 0.5 * (p - q)).collect();
            out.push(Pair { eps, f_plus: shaped[plus], f_minus: shaped[minus] });
        }
        out
    }
}

pub fn pgpe_step(state: &Pgpe, pop: &Population) -> Result<Pgpe> {
    let dims = state.mean.len();
    ensure_len(dims, pop.dims())?;
    if pop.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!("PGPE needs an even population, got {}", pop.len())));
    }
    let shaped = centered_rank_averaged(&pop.fitness)?;
    let pairs = state.pairs(pop, &shaped);
    let count = pairs.len() as f64;
    let baseline = {
        let mut s = shaped.clone();
        s.sort_by(f64::total_cmp);
        s.iter().sum::<f64>() / s.len() as f64
    };

    let mut mean_grad = vec![0.0; dims];
    let mut sigma_grad = vec![0.0; dims];
    for p in &pairs {
        let diff = 0.5 * (p.f_plus - p.f_minus);
        let reward = 0.5 * (p.f_plus + p.f_minus) - baseline;
        for d in 0..dims {
            let s = state.sigma[d];
            mean_grad[d] += p.eps[d] * diff;
            sigma_grad[d] += (p.eps[d] * p.eps[d] - s * s) / s * reward;
        }
    }
    for d in 0..dims {
        mean_grad[d] /= count;
        sigma_grad[d] /= count;
    }

    let (delta, adam) = adam_update(&state.adam, &mean_grad)?;
    let mut next = state.clone();
    next.adam = adam;
    for d in 0..dims {
        next.mean[d] -= delta[d];
        let limit = state.max_sigma_change * state.sigma[d];
        let change = (-state.sigma_lr * sigma_grad[d]).clamp(-limit, limit);
        next.sigma[d] = state.sigma[d] + change;
    }
    next.best_fitness = best_of(state.best_fitness, &pop.fitness);
    Ok(next)
}

impl Strategy for Pgpe {
    fn name(&self) -> &'static str {
        "pgpe"
    }
    fn dims(&self) -> usize {
        self.mean.len()
    }
    /// Rows `2i` and `2i + 1` are the mirrored pair `mean +/- sigma * z_i`.
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        ensure_popsize(popsize)?;
        if popsize % 2 != 0 {
            return Err(Error::InvalidArgument(format!("PGPE needs an even population, got {popsize}")));
        }
        let dims = self.mean.len();
        let mut x = Matrix::zeros(popsize, dims);
        for i in 0..popsize / 2 {
            for d in 0..dims {
                let eps = self.sigma[d] * rng::normal(rng);
                x[(2 * i, d)] = self.mean[d] + eps;
                x[(2 * i + 1, d)] = self.mean[d] - eps;
            }
        }
        Ok(x)
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        *self = pgpe_step(self, pop)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.mean
    }
    fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}
