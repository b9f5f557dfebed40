//! Fitness transforms and the N x 3 token matrix consumed by the attention
//! layer. Column order is fixed: z-score, centered rank, improvement flag.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_popsize, Result};
use crate::math;
use crate::matrix::Matrix;

pub const FEATURE_COLUMNS: usize = 3;
const STD_GUARD: f64 = 1e-10;

/// Per-member fitness tokens, one row per population member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessFeatures {
    pub tokens: Matrix,
}

impl FitnessFeatures {
    pub fn popsize(&self) -> usize {
        self.tokens.rows()
    }
}

/// `(f - mean) / (std_pop + 1e-10)`; all zeros for constant input.
///
/// Sums run over the sorted values so the output is exactly equivariant to
/// permutations of the input.
pub fn zscore(fitness: &[f64]) -> Result<Vec<f64>> {
    ensure_popsize(fitness.len())?;
    let n = fitness.len() as f64;
    if fitness.iter().all(|&f| f == fitness[0]) {
        return Ok(vec![0.0; fitness.len()]);
    }
    let mut sorted = fitness.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n;
    let var = sorted.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / n;
    let denom = math::sqrt(var) + STD_GUARD;
    Ok(fitness.iter().map(|f| (f - mean) / denom).collect())
}

/// Best (lowest) fitness maps to -0.5, worst to +0.5; ties by lower index.
pub fn centered_rank(fitness: &[f64]) -> Result<Vec<f64>> {
    ensure_popsize(fitness.len())?;
    let denom = (fitness.len() - 1) as f64;
    Ok(math::ranks(fitness).into_iter().map(|r| r as f64 / denom - 0.5).collect())
}

/// Centered ranks where tied fitness values share their average rank.
///
/// Used by the gradient-style baselines so that a flat fitness landscape
/// produces an exactly zero update.
pub fn centered_rank_averaged(fitness: &[f64]) -> Result<Vec<f64>> {
    ensure_popsize(fitness.len())?;
    let denom = (fitness.len() - 1) as f64;
    Ok(math::average_ranks(fitness).into_iter().map(|r| r / denom - 0.5).collect())
}

/// 1 where the member strictly improves on the best fitness of earlier generations.
pub fn improvement_flags(fitness: &[f64], best_so_far: f64) -> Vec<f64> {
    fitness.iter().map(|&f| if f < best_so_far { 1.0 } else { 0.0 }).collect()
}

pub fn fitness_features(fitness: &[f64], best_so_far: f64) -> Result<FitnessFeatures> {
    let z = zscore(fitness)?;
    let r = centered_rank(fitness)?;
    let flags = improvement_flags(fitness, best_so_far);
    let mut tokens = Matrix::zeros(fitness.len(), FEATURE_COLUMNS);
    for j in 0..fitness.len() {
        tokens.row_mut(j).copy_from_slice(&[z[j], r[j], flags[j]]);
    }
    Ok(FitnessFeatures { tokens })
}
