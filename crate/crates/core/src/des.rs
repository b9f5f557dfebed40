//! Discovered evolution strategy: closed-form rank weights
//! `softmax(-20 * sigmoid(beta * r))` over centered ranks `r` with fixed
//! learning rates.
//!
//! The printed algorithm listing drops the `1 -` in `20 * (1 - sigmoid)`; the
//! closed form and the reference code agree with each other, so that form is
//! used. By softmax shift-invariance `softmax(20 (1 - s)) = softmax(-20 s)`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_popsize, Error, Result};
use crate::math;
use crate::search::{gaussian_update, init_state, ClipBounds, Population, SearchState, UpdateWeights};

pub const DEFAULT_BETA: f64 = 12.5;
const LOGIT_SCALE: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesConfig {
    pub beta: f64,
    pub alpha_m: f64,
    pub alpha_sigma: f64,
    pub sigma0: Vec<f64>,
    #[serde(default)]
    pub clip: ClipBounds,
}

impl DesConfig {
    pub fn new(dims: usize) -> Self {
        Self { beta: DEFAULT_BETA, alpha_m: 1.0, alpha_sigma: 0.1, sigma0: vec![1.0; dims], clip: ClipBounds::default() }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("temperature must be non-negative, got {}", self.beta)));
        }
        Ok(())
    }

    pub fn init_state(&self, m0: &[f64]) -> Result<SearchState> {
        init_state(m0.len(), m0, &self.sigma0)
    }
}

/// Weights in rank order (index 0 = best member).
pub fn des_weights(popsize: usize, beta: f64) -> Result<Vec<f64>> {
    ensure_popsize(popsize)?;
    let denom = (popsize - 1) as f64;
    let logits: Vec<f64> =
        (0..popsize).map(|k| -LOGIT_SCALE * math::sigmoid(beta * (k as f64 / denom - 0.5))).collect();
    Ok(math::softmax(&logits))
}

pub fn des_step(state: &SearchState, pop: &Population, cfg: &DesConfig) -> Result<SearchState> {
    cfg.validate()?;
    let order = pop.canonical_order();
    let sorted = pop.reordered(&order);
    let w = des_weights(sorted.len(), cfg.beta)?;
    let uw = UpdateWeights::broadcast(w, state.dims(), cfg.alpha_m, cfg.alpha_sigma);
    gaussian_update(state, &sorted, &uw, &cfg.clip)
}

/// Least-squares temperature fit to observed rank-ordered weight rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaFit {
    pub beta: f64,
    /// Root-mean-square residual over all weight entries.
    pub residual: f64,
}

pub const BETA_MAX: f64 = 100.0;

fn beta_loss(rows: &[Vec<f64>], beta: f64) -> f64 {
    let mut sse = 0.0;
    let mut count = 0usize;
    for row in rows {
        let model = des_weights(row.len(), beta).expect("rows validated");
        sse += row.iter().zip(&model).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        count += row.len();
    }
    sse / count as f64
}

/// Fit `beta` in `[0, BETA_MAX]`: a coarse scan picks the bracket, then
/// golden-section search refines it.
pub fn fit_des_beta(rows: &[Vec<f64>]) -> Result<BetaFit> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no weight rows to fit".into()));
    }
    for r in rows {
        ensure_popsize(r.len())?;
    }
    const GRID: usize = 400;
    let step = BETA_MAX / GRID as f64;
    let losses: Vec<f64> = (0..=GRID).map(|i| beta_loss(rows, i as f64 * step)).collect();
    let best = math::argsort(&losses)[0];
    let mut lo = (best as f64 - 1.0).max(0.0) * step;
    let mut hi = ((best + 1) as f64 * step).min(BETA_MAX);

    let ratio = (math::sqrt(5.0) - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = beta_loss(rows, c);
    let mut fd = beta_loss(rows, d);
    for _ in 0..200 {
        if hi - lo < 1e-10 {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = beta_loss(rows, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = beta_loss(rows, d);
        }
    }
    let mut beta = 0.5 * (lo + hi);
    let mut loss = beta_loss(rows, beta);
    if losses[best] < loss {
        beta = best as f64 * step;
        loss = losses[best];
    }
    Ok(BetaFit { beta, residual: math::sqrt(loss) })
}
