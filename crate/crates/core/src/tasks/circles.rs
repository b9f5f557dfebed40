//! Two-concentric-circles binary classification with a small tanh MLP,
//! used as a desk-scale neuroevolution problem.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{ensure_len, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::rng;

pub const CIRCLES_POINTS: usize = 512;
pub const CIRCLES_HIDDEN: usize = 16;
pub const CIRCLES_NOISE: f64 = 0.05;
pub const CIRCLES_DATA_SEED: u64 = 0x00c1_c1e5;
const INNER_RADIUS: f64 = 0.5;

/// Weight count of the 2-16-16-1 network: each layer stores its weight
/// matrix (row-major, inputs by outputs) followed by its bias.
pub const CIRCLES_PARAMS: usize = 2 * CIRCLES_HIDDEN + CIRCLES_HIDDEN + CIRCLES_HIDDEN * CIRCLES_HIDDEN + CIRCLES_HIDDEN + CIRCLES_HIDDEN + 1;

#[derive(Clone, Debug, PartialEq)]
pub struct CirclesTask {
    pub inputs: Matrix,
    pub labels: Vec<f64>,
}

impl Default for CirclesTask {
    fn default() -> Self {
        Self::new()
    }
}

impl CirclesTask {
    /// Half the points lie on the unit circle (label 0), half on the inner
    /// circle (label 1), at evenly spaced angles with Gaussian jitter.
    pub fn new() -> Self {
        let mut r = rng::stream(CIRCLES_DATA_SEED);
        let half = CIRCLES_POINTS / 2;
        let mut inputs = Matrix::zeros(CIRCLES_POINTS, 2);
        let mut labels = Vec::with_capacity(CIRCLES_POINTS);
        for i in 0..CIRCLES_POINTS {
            let (radius, label, k) = if i < half { (1.0, 0.0, i) } else { (INNER_RADIUS, 1.0, i - half) };
            let angle = 2.0 * PI * k as f64 / half as f64;
            inputs[(i, 0)] = radius * math::cos(angle) + CIRCLES_NOISE * rng::normal(&mut r);
            inputs[(i, 1)] = radius * math::sin(angle) + CIRCLES_NOISE * rng::normal(&mut r);
            labels.push(label);
        }
        Self { inputs, labels }
    }

    /// Output logit of the network for one input point.
    pub fn logit(params: &[f64], x: &[f64]) -> f64 {
        let h = CIRCLES_HIDDEN;
        let (w1, rest) = params.split_at(2 * h);
        let (b1, rest) = rest.split_at(h);
        let (w2, rest) = rest.split_at(h * h);
        let (b2, rest) = rest.split_at(h);
        let (w3, b3) = rest.split_at(h);
        let mut h1 = [0.0; CIRCLES_HIDDEN];
        for j in 0..h {
            h1[j] = math::tanh(b1[j] + x[0] * w1[j] + x[1] * w1[h + j]);
        }
        let mut out = b3[0];
        for j in 0..h {
            let mut a = b2[j];
            for (i, v) in h1.iter().enumerate() {
                a += v * w2[i * h + j];
            }
            out += math::tanh(a) * w3[j];
        }
        out
    }

    /// Mean binary cross-entropy, computed stably from logits.
    pub fn loss(&self, params: &[f64]) -> Result<f64> {
        ensure_len(CIRCLES_PARAMS, params.len())?;
        let total: f64 = self
            .inputs
            .iter_rows()
            .zip(&self.labels)
            .map(|(x, y)| {
                let l = Self::logit(params, x);
                math::softplus(l) - y * l
            })
            .sum();
        Ok(total / self.labels.len() as f64)
    }

    pub fn accuracy(&self, params: &[f64]) -> Result<f64> {
        ensure_len(CIRCLES_PARAMS, params.len())?;
        let hits = self
            .inputs
            .iter_rows()
            .zip(&self.labels)
            .filter(|(x, y)| (Self::logit(params, x) > 0.0) == (**y > 0.5))
            .count();
        Ok(hits as f64 / self.labels.len() as f64)
    }
}

/// Loss of `params` on the standard dataset. The data are fixed, so the
/// evaluation seed has no effect; it is accepted for interface parity.
pub fn circles_task(params: &[f64], _eval_seed: u64) -> Result<f64> {
    CirclesTask::new().loss(params)
}
