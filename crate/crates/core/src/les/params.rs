use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;
use crate::shaping::FEATURE_COLUMNS;

pub const DEFAULT_KEY_DIM: usize = 8;
pub const DEFAULT_HIDDEN: usize = 8;

/// Width of the learning-rate MLP input: two 3-timescale paths plus the
/// 13-entry timestamp embedding.
pub const MLP_INPUT: usize = 3 + 3 + super::network::TIME_SCALES.len();

/// Learned parameters: query/key/value projections of the fitness tokens and
/// the per-dimension learning-rate MLP (shared hidden layer, two heads).
///
/// Flat layout, row-major: `wq, bq, wk, bk, wv, bv, mlp_w, mlp_b,
/// head_mean_w, head_mean_b, head_sigma_w, head_sigma_b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LesParams {
    pub key_dim: usize,
    pub hidden: usize,
    /// 3 x key_dim
    pub wq: Matrix,
    pub bq: Vec<f64>,
    /// 3 x key_dim
    pub wk: Matrix,
    pub bk: Vec<f64>,
    pub wv: [f64; FEATURE_COLUMNS],
    pub bv: f64,
    /// 19 x hidden
    pub mlp_w: Matrix,
    pub mlp_b: Vec<f64>,
    pub head_mean_w: Vec<f64>,
    pub head_mean_b: f64,
    pub head_sigma_w: Vec<f64>,
    pub head_sigma_b: f64,
}

pub const fn param_count(key_dim: usize, hidden: usize) -> usize {
    2 * (FEATURE_COLUMNS * key_dim + key_dim) + (FEATURE_COLUMNS + 1) + (MLP_INPUT * hidden + hidden) + 2 * (hidden + 1)
}

impl LesParams {
    pub fn zeros(key_dim: usize, hidden: usize) -> Self {
        Self {
            key_dim,
            hidden,
            wq: Matrix::zeros(FEATURE_COLUMNS, key_dim),
            bq: vec![0.0; key_dim],
            wk: Matrix::zeros(FEATURE_COLUMNS, key_dim),
            bk: vec![0.0; key_dim],
            wv: [0.0; FEATURE_COLUMNS],
            bv: 0.0,
            mlp_w: Matrix::zeros(MLP_INPUT, hidden),
            mlp_b: vec![0.0; hidden],
            head_mean_w: vec![0.0; hidden],
            head_mean_b: 0.0,
            head_sigma_w: vec![0.0; hidden],
            head_sigma_b: 0.0,
        }
    }

    pub fn default_zeros() -> Self {
        Self::zeros(DEFAULT_KEY_DIM, DEFAULT_HIDDEN)
    }

    /// I.i.d. normal entries with standard deviation `scale`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, key_dim: usize, hidden: usize, scale: f64) -> Self {
        let flat: Vec<f64> = (0..param_count(key_dim, hidden)).map(|_| scale * rng::normal(rng)).collect();
        Self::unflatten(key_dim, hidden, &flat).expect("length matches param_count")
    }

    pub fn len(&self) -> usize {
        param_count(self.key_dim, self.hidden)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(self.wq.as_slice());
        out.extend_from_slice(&self.bq);
        out.extend_from_slice(self.wk.as_slice());
        out.extend_from_slice(&self.bk);
        out.extend_from_slice(&self.wv);
        out.push(self.bv);
        out.extend_from_slice(self.mlp_w.as_slice());
        out.extend_from_slice(&self.mlp_b);
        out.extend_from_slice(&self.head_mean_w);
        out.push(self.head_mean_b);
        out.extend_from_slice(&self.head_sigma_w);
        out.push(self.head_sigma_b);
        out
    }

    pub fn unflatten(key_dim: usize, hidden: usize, flat: &[f64]) -> Result<Self> {
        if key_dim == 0 || hidden == 0 {
            return Err(Error::InvalidArgument("key_dim and hidden must be positive".into()));
        }
        let expected = param_count(key_dim, hidden);
        if flat.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: flat.len() });
        }
        let mut rest = flat;
        let mut take = |n: usize| {
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head.to_vec()
        };
        let wq = Matrix::from_vec(FEATURE_COLUMNS, key_dim, take(FEATURE_COLUMNS * key_dim))?;
        let bq = take(key_dim);
        let wk = Matrix::from_vec(FEATURE_COLUMNS, key_dim, take(FEATURE_COLUMNS * key_dim))?;
        let bk = take(key_dim);
        let wv_vec = take(FEATURE_COLUMNS);
        let bv = take(1)[0];
        let mlp_w = Matrix::from_vec(MLP_INPUT, hidden, take(MLP_INPUT * hidden))?;
        let mlp_b = take(hidden);
        let head_mean_w = take(hidden);
        let head_mean_b = take(1)[0];
        let head_sigma_w = take(hidden);
        let head_sigma_b = take(1)[0];
        Ok(Self {
            key_dim,
            hidden,
            wq,
            bq,
            wk,
            bk,
            wv: [wv_vec[0], wv_vec[1], wv_vec[2]],
            bv,
            mlp_w,
            mlp_b,
            head_mean_w,
            head_mean_b,
            head_sigma_w,
            head_sigma_b,
        })
    }

    pub fn check_finite(&self) -> Result<()> {
        if let Some(i) = self.flatten().iter().position(|v| !v.is_finite()) {
            return Err(Error::ContractViolation(format!("LES parameter {i} is not finite")));
        }
        Ok(())
    }
}
