use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::params::{LesParams, MLP_INPUT};
use crate::error::{ensure_len, ensure_popsize, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::shaping::{FitnessFeatures, FEATURE_COLUMNS};

/// Evolution-path timescales.
pub const PATH_RATES: [f64; 3] = [0.1, 0.5, 0.9];

/// Timestamp-embedding scales.
pub const TIME_SCALES: [f64; 13] =
    [1.0, 3.0, 10.0, 30.0, 50.0, 100.0, 250.0, 500.0, 750.0, 1000.0, 1250.0, 1500.0, 2000.0];

/// Divisor of the attention logits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttentionScale {
    /// sqrt(key_dim)
    #[default]
    SqrtKeyDim,
    /// sqrt(population size)
    SqrtPopsize,
}

/// How a path column moves towards a new displacement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathConvention {
    /// `p' = (1 - a) p + a * delta`
    #[default]
    Ema,
    /// `p' = (1 - a) p + a * (delta - p)`
    LiteralAppendix,
}

/// Path configuration: the three timescales and the 13 embedding scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub timescales: [f64; 3],
    pub gammas: [f64; 13],
}

impl Default for PathConfig {
    fn default() -> Self {
        Self { timescales: PATH_RATES, gammas: TIME_SCALES }
    }
}

fn project(tokens: &Matrix, w: &Matrix, b: &[f64]) -> Matrix {
    let mut out = Matrix::zeros(tokens.rows(), w.cols());
    for j in 0..tokens.rows() {
        let row = tokens.row(j);
        for c in 0..w.cols() {
            let mut acc = b[c];
            for (f, &x) in row.iter().enumerate() {
                acc += x * w[(f, c)];
            }
            out[(j, c)] = acc;
        }
    }
    out
}

/// Recombination weights as self-attention over the fitness tokens:
/// `softmax(rowsoftmax(Q K^T / scale) V)`.
pub fn attention_weights(params: &LesParams, features: &FitnessFeatures, scale: AttentionScale) -> Result<Vec<f64>> {
    params.check_finite()?;
    let tokens = &features.tokens;
    let n = tokens.rows();
    ensure_popsize(n)?;
    ensure_len(FEATURE_COLUMNS, tokens.cols())?;

    let q = project(tokens, &params.wq, &params.bq);
    let k = project(tokens, &params.wk, &params.bk);
    let v: Vec<f64> = tokens
        .iter_rows()
        .map(|row| params.bv + row.iter().zip(&params.wv).map(|(x, w)| x * w).sum::<f64>())
        .collect();
    let divisor = match scale {
        AttentionScale::SqrtKeyDim => math::sqrt(params.key_dim as f64),
        AttentionScale::SqrtPopsize => math::sqrt(n as f64),
    };

    let mut logits = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        scores.clear();
        scores.extend((0..n).map(|j| math::dot(q.row(i), k.row(j)) / divisor));
        let attn = math::softmax(&scores);
        logits.push(math::dot(&attn, &v));
    }
    Ok(math::softmax(&logits))
}

/// `tanh(t / gamma_i - 1)` for each embedding scale.
pub fn timestamp_embedding(t: u64) -> [f64; 13] {
    let t = t as f64;
    TIME_SCALES.map(|g| math::tanh(t / g - 1.0))
}

/// Move each of the three path columns towards `delta` at its own rate.
pub fn update_paths(paths: &Matrix, delta: &[f64], timescales: &[f64; 3], convention: PathConvention) -> Result<Matrix> {
    ensure_len(paths.rows(), delta.len())?;
    ensure_len(timescales.len(), paths.cols())?;
    let mut out = paths.clone();
    for d in 0..paths.rows() {
        for (c, &a) in timescales.iter().enumerate() {
            let p = paths[(d, c)];
            out[(d, c)] = match convention {
                PathConvention::Ema => (1.0 - a) * p + a * delta[d],
                PathConvention::LiteralAppendix => (1.0 - a) * p + a * (delta[d] - p),
            };
        }
    }
    Ok(out)
}

/// Per-dimension `(alpha_m, alpha_sigma)` from the path rows and the timestamp
/// embedding. Weights are shared across dimensions.
pub fn lrate_mlp(params: &LesParams, path_c_row: &[f64; 3], path_sigma_row: &[f64; 3], embed: &[f64; 13]) -> (f64, f64) {
    let mut input = [0.0; MLP_INPUT];
    input[..3].copy_from_slice(path_c_row);
    input[3..6].copy_from_slice(path_sigma_row);
    input[6..].copy_from_slice(embed);

    let mut mean_logit = params.head_mean_b;
    let mut sigma_logit = params.head_sigma_b;
    for h in 0..params.hidden {
        let mut acc = params.mlp_b[h];
        for (i, &x) in input.iter().enumerate() {
            acc += x * params.mlp_w[(i, h)];
        }
        let act = acc.max(0.0);
        mean_logit += act * params.head_mean_w[h];
        sigma_logit += act * params.head_sigma_w[h];
    }
    (math::sigmoid(mean_logit), math::sigmoid(sigma_logit))
}
