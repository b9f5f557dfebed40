//! Hand-crafted comparison strategies.
//!
//! Where the source configuration is silent, constants follow the published
//! defaults of each method; the reference is named next to each constant.

mod adam;
mod cma;
mod openes;
mod pgpe;
mod sepcma;
mod snes;

pub use adam::{adam_update, AdamState};
pub use cma::{cmaes_step, CmaEs};
pub use openes::{openes_step, OpenEs};
pub use pgpe::{pgpe_step, Pgpe};
pub use sepcma::{sepcma_step, SepCmaEs};
pub use snes::{snes_step, snes_utilities, Snes};

use alloc::vec::Vec;

use crate::math;

/// Positive recombination weights `ln((lambda + 1) / 2) - ln(i)`, i = 1..mu,
/// normalized to sum to one (Hansen, "The CMA Evolution Strategy: A
/// Tutorial", 2016).
pub(crate) fn log_weights(mu: usize, lambda: usize) -> Vec<f64> {
    let base = math::ln((lambda as f64 + 1.0) / 2.0);
    let raw: Vec<f64> = (1..=mu).map(|i| base - math::ln(i as f64)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// E||N(0, I_n)||.
pub(crate) fn chi_n(n: usize) -> f64 {
    let n = n as f64;
    math::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))
}
