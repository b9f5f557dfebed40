use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Result};
use crate::math;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(dims: usize, lr: f64) -> Self {
        Self { m: vec![0.0; dims], v: vec![0.0; dims], step: 0, lr, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// One bias-corrected Adam step. The returned vector is to be subtracted
/// from the parameters (descent).
pub fn adam_update(adam: &AdamState, grad: &[f64]) -> Result<(Vec<f64>, AdamState)> {
    ensure_len(adam.m.len(), grad.len())?;
    let mut next = adam.clone();
    next.step += 1;
    let t = next.step as i32;
    let c1 = 1.0 - libm::pow(adam.beta1, t as f64);
    let c2 = 1.0 - libm::pow(adam.beta2, t as f64);
    let mut delta = vec![0.0; grad.len()];
    for i in 0..grad.len() {
        next.m[i] = adam.beta1 * adam.m[i] + (1.0 - adam.beta1) * grad[i];
        next.v[i] = adam.beta2 * adam.v[i] + (1.0 - adam.beta2) * grad[i] * grad[i];
        let m_hat = next.m[i] / c1;
        let v_hat = next.v[i] / c2;
        delta[i] = adam.lr * m_hat / (math::sqrt(v_hat) + adam.eps);
    }
    Ok((delta, next))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_zero_step() {
        let (step, next) = adam_update(&AdamState::new(3, 0.1), &[0.0; 3]).unwrap();
        assert_eq!(step, [0.0; 3]);
        assert_eq!(next.step, 1);
    }

    #[test]
    fn first_step_is_lr_times_sign() {
        // m_hat = g, v_hat = g^2  =>  step = lr * g / (|g| + eps)
        let g = [2.0, -0.5, 1e-3];
        let (step, _) = adam_update(&AdamState::new(3, 0.05), &g).unwrap();
        for (s, gi) in step.iter().zip(g) {
            let expected = 0.05 * gi / (gi.abs() + 1e-8);
            assert!((s - expected).abs() < 1e-12);
            assert!((s.abs() - 0.05).abs() < 0.05 * 1e-5);
        }
    }

    #[test]
    fn constant_gradient_keeps_unit_ratio() {
        // With bias correction m_hat = g and v_hat = g^2 for any constant g.
        let mut adam = AdamState::new(1, 1.0);
        for _ in 0..500 {
            let (step, next) = adam_update(&adam, &[3.0]).unwrap();
            assert!((step[0] - 1.0).abs() < 1e-6);
            adam = next;
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(adam_update(&AdamState::new(2, 0.1), &[1.0]).is_err());
    }
}
