use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{chi_n, log_weights};
use crate::error::{ensure_len, ensure_popsize, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::rng;
use crate::search::Population;
use crate::strategy::{best_of, check_sigma0, Strategy};

/// Eigenvalues are kept at least this large after each update.
const EIGEN_FLOOR: f64 = 1e-12;

/// Full-covariance CMA-ES following Hansen's 2016 tutorial, with the
/// eigendecomposition refreshed every generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmaEs {
    pub mean: Vec<f64>,
    pub sigma: f64,
    pub cov: Matrix,
    /// Eigenvectors of `cov`, one per column.
    pub basis: Matrix,
    /// Square roots of the eigenvalues of `cov`.
    pub scales: Vec<f64>,
    pub path_c: Vec<f64>,
    pub path_sigma: Vec<f64>,
    pub generation: u64,
    /// Number of times the covariance needed an eigenvalue lift.
    pub regularizations: u64,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn from_dmatrix(m: &DMatrix<f64>) -> Matrix {
    let mut out = Matrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

impl CmaEs {
    pub fn new(m0: &[f64], sigma0: f64) -> Result<Self> {
        check_sigma0(sigma0)?;
        let n = m0.len();
        Ok(Self {
            mean: m0.to_vec(),
            sigma: sigma0,
            cov: Matrix::identity(n),
            basis: Matrix::identity(n),
            scales: vec![1.0; n],
            path_c: vec![0.0; n],
            path_sigma: vec![0.0; n],
            generation: 0,
            regularizations: 0,
            best_fitness: f64::INFINITY,
        })
    }

    /// `C^{-1/2} v = B D^{-1} B^T v`.
    fn whiten(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        let proj: Vec<f64> =
            (0..n).map(|k| (0..n).map(|i| self.basis[(i, k)] * v[i]).sum::<f64>() / self.scales[k]).collect();
        (0..n).map(|i| (0..n).map(|k| self.basis[(i, k)] * proj[k]).sum()).collect()
    }
}

pub fn cmaes_step(state: &CmaEs, pop: &Population) -> Result<CmaEs> {
    let n = state.mean.len();
    ensure_len(n, pop.dims())?;
    let lambda = pop.len();
    let mu = (lambda / 2).max(1);
    let w = log_weights(mu, lambda);
    let mu_eff = 1.0 / w.iter().map(|x| x * x).sum::<f64>();
    let nf = n as f64;

    let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * (math::sqrt((mu_eff - 1.0) / (nf + 1.0)) - 1.0).max(0.0) + c_sigma;
    let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
    let c1 = 2.0 / ((nf + 1.3) * (nf + 1.3) + mu_eff);
    let cmu = (1.0 - c1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0) * (nf + 2.0) + mu_eff)).max(0.0);

    let sorted = pop.reordered(&pop.canonical_order());
    let y: Vec<Vec<f64>> = (0..mu)
        .map(|j| (0..n).map(|d| (sorted.candidates[(j, d)] - state.mean[d]) / state.sigma).collect())
        .collect();
    let y_w: Vec<f64> = (0..n).map(|d| (0..mu).map(|j| w[j] * y[j][d]).sum()).collect();

    let mut next = state.clone();
    let white = state.whiten(&y_w);
    let amp_sigma = math::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff);
    for d in 0..n {
        next.mean[d] = state.mean[d] + state.sigma * y_w[d];
        next.path_sigma[d] = (1.0 - c_sigma) * state.path_sigma[d] + amp_sigma * white[d];
    }
    let ps_norm = math::norm(&next.path_sigma);
    let decay = 1.0 - math::powf(1.0 - c_sigma, 2.0 * (state.generation as f64 + 1.0));
    let h_sigma = if ps_norm / math::sqrt(decay) < (1.4 + 2.0 / (nf + 1.0)) * chi_n(n) { 1.0 } else { 0.0 };
    let amp_c = math::sqrt(c_c * (2.0 - c_c) * mu_eff);
    for d in 0..n {
        next.path_c[d] = (1.0 - c_c) * state.path_c[d] + h_sigma * amp_c * y_w[d];
    }

    let delta_h = (1.0 - h_sigma) * c_c * (2.0 - c_c);
    let mut cov = to_dmatrix(&state.cov) * (1.0 - c1 - cmu + c1 * delta_h);
    let pc = DVector::from_column_slice(&next.path_c);
    cov += &pc * pc.transpose() * c1;
    for j in 0..mu {
        let yj = DVector::from_column_slice(&y[j]);
        cov += &yj * yj.transpose() * (cmu * w[j]);
    }
    cov = (&cov + cov.transpose()) * 0.5;

    let mut eig = cov.clone().symmetric_eigen();
    let lowest = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(lowest > 0.0) {
        let lift = EIGEN_FLOOR - lowest.min(0.0);
        for i in 0..n {
            cov[(i, i)] += lift;
        }
        eig = cov.clone().symmetric_eigen();
        next.regularizations += 1;
    }
    next.cov = from_dmatrix(&cov);
    next.basis = from_dmatrix(&eig.eigenvectors);
    next.scales = eig.eigenvalues.iter().map(|l| math::sqrt(l.max(EIGEN_FLOOR))).collect();

    next.sigma = state.sigma * math::exp((c_sigma / d_sigma) * (ps_norm / chi_n(n) - 1.0));
    next.generation = state.generation + 1;
    next.best_fitness = best_of(state.best_fitness, &pop.fitness);
    Ok(next)
}

impl Strategy for CmaEs {
    fn name(&self) -> &'static str {
        "cma"
    }
    fn dims(&self) -> usize {
        self.mean.len()
    }
    /// `x = m + sigma B D z`.
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        ensure_popsize(popsize)?;
        let n = self.mean.len();
        let mut x = Matrix::zeros(popsize, n);
        let mut z = vec![0.0; n];
        for j in 0..popsize {
            for (k, zk) in z.iter_mut().enumerate() {
                *zk = self.scales[k] * rng::normal(rng);
            }
            for i in 0..n {
                let step: f64 = (0..n).map(|k| self.basis[(i, k)] * z[k]).sum();
                x[(j, i)] = self.mean[i] + self.sigma * step;
            }
        }
        Ok(x)
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        *self = cmaes_step(self, pop)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.mean
    }
    fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}
