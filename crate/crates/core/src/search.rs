//! Diagonal Gaussian search distribution with ask/tell semantics.
//!
//! The moving-average update here is shared by the learned strategy, the
//! discovered strategy and the fixed-weight baseline; they differ only in how
//! they produce [`UpdateWeights`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, ensure_popsize, Error, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::rng;

/// Added under the square root of the standard-deviation update.
pub const SIGMA_EPS: f64 = 1e-10;

/// Number of evolution-path timescales.
pub const PATH_TIMESCALES: usize = 3;

/// Per-run strategy state (minimization convention).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
    pub gen_counter: u64,
    #[serde(with = "crate::serde_f64")]
    pub best_fitness: f64,
    /// D x 3 evolution path of the weighted mean displacement.
    pub path_c: Matrix,
    /// D x 3 evolution path of the weighted normalized displacement.
    pub path_sigma: Matrix,
}

impl SearchState {
    pub fn dims(&self) -> usize {
        self.mean.len()
    }
}

/// Elementwise bounds applied to sampled candidates and to the mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClipBounds {
    pub min: f64,
    pub max: f64,
}

impl Default for ClipBounds {
    fn default() -> Self {
        Self { min: -1e10, max: 1e10 }
    }
}

impl ClipBounds {
    #[inline]
    pub fn clip(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }
}

/// Candidates (N x D) and their fitness (lower is better).
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub candidates: Matrix,
    pub fitness: Vec<f64>,
}

impl Population {
    pub fn new(candidates: Matrix, fitness: Vec<f64>) -> Result<Self> {
        ensure_len(candidates.rows(), fitness.len())?;
        ensure_popsize(fitness.len())?;
        Ok(Self { candidates, fitness })
    }

    pub fn len(&self) -> usize {
        self.fitness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fitness.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.candidates.cols()
    }

    /// Order that sorts members by fitness, then by candidate vector.
    ///
    /// Every tell reduces over members in this order, so a permuted
    /// population yields a bit-identical update.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.fitness[a]
                .total_cmp(&self.fitness[b])
                .then_with(|| math::lexicographic_cmp(self.candidates.row(a), self.candidates.row(b)))
                .then(a.cmp(&b))
        });
        idx
    }

    pub fn reordered(&self, order: &[usize]) -> Self {
        Self {
            candidates: self.candidates.select_rows(order),
            fitness: order.iter().map(|&i| self.fitness[i]).collect(),
        }
    }

    pub fn best_index(&self) -> usize {
        math::argsort(&self.fitness)[0]
    }
}

/// Recombination weights and per-dimension learning rates for one update.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpdateWeights {
    pub w: Vec<f64>,
    pub alpha_m: Vec<f64>,
    pub alpha_sigma: Vec<f64>,
}

impl UpdateWeights {
    /// Same learning rates on every dimension.
    pub fn broadcast(w: Vec<f64>, dims: usize, alpha_m: f64, alpha_sigma: f64) -> Self {
        Self { w, alpha_m: vec![alpha_m; dims], alpha_sigma: vec![alpha_sigma; dims] }
    }

    pub fn check_simplex(&self) -> Result<()> {
        let total: f64 = self.w.iter().sum();
        if self.w.iter().any(|&v| !(v >= 0.0)) || !((total - 1.0).abs() <= 1e-6) {
            return Err(Error::ContractViolation(format!(
                "recombination weights must be non-negative and sum to 1 (sum = {total})"
            )));
        }
        Ok(())
    }
}

pub fn init_state(dims: usize, m0: &[f64], sigma0: &[f64]) -> Result<SearchState> {
    if dims == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    ensure_len(dims, m0.len())?;
    ensure_len(dims, sigma0.len())?;
    if sigma0.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidArgument("initial sigma must be positive".into()));
    }
    Ok(SearchState {
        mean: m0.to_vec(),
        sigma: sigma0.to_vec(),
        gen_counter: 0,
        best_fitness: f64::INFINITY,
        path_c: Matrix::zeros(dims, PATH_TIMESCALES),
        path_sigma: Matrix::zeros(dims, PATH_TIMESCALES),
    })
}

/// Sample `popsize` candidates `mean + sigma * z`, z ~ N(0, I), row by row.
pub fn sample_diagonal<R: Rng + ?Sized>(
    mean: &[f64],
    sigma: &[f64],
    rng: &mut R,
    popsize: usize,
    clip: &ClipBounds,
) -> Result<Matrix> {
    ensure_popsize(popsize)?;
    ensure_len(mean.len(), sigma.len())?;
    let dims = mean.len();
    let mut x = Matrix::zeros(popsize, dims);
    for j in 0..popsize {
        let row = x.row_mut(j);
        for d in 0..dims {
            row[d] = clip.clip(mean[d] + sigma[d] * rng::normal(rng));
        }
    }
    Ok(x)
}

pub fn ask<R: Rng + ?Sized>(
    state: &SearchState,
    rng: &mut R,
    popsize: usize,
    clip: &ClipBounds,
) -> Result<Matrix> {
    sample_diagonal(&state.mean, &state.sigma, rng, popsize, clip)
}

/// Fitness-weighted exponential moving average of mean and std.
///
/// Reduces over members sorted by (fitness, candidate, weight), so the
/// result does not depend on the population's row order.
pub fn gaussian_update(
    state: &SearchState,
    pop: &Population,
    uw: &UpdateWeights,
    clip: &ClipBounds,
) -> Result<SearchState> {
    let dims = state.dims();
    let n = pop.len();
    ensure_len(dims, pop.dims())?;
    ensure_len(n, uw.w.len())?;
    ensure_len(dims, uw.alpha_m.len())?;
    ensure_len(dims, uw.alpha_sigma.len())?;
    uw.check_simplex()?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        pop.fitness[a]
            .total_cmp(&pop.fitness[b])
            .then_with(|| math::lexicographic_cmp(pop.candidates.row(a), pop.candidates.row(b)))
            .then_with(|| uw.w[a].total_cmp(&uw.w[b]))
    });

    let mut next = state.clone();
    for d in 0..dims {
        let m = state.mean[d];
        let mut weighted_mean = 0.0;
        let mut weighted_var = 0.0;
        for &j in &order {
            let x = pop.candidates[(j, d)];
            weighted_mean += uw.w[j] * x;
            weighted_var += uw.w[j] * (x - m) * (x - m);
        }
        let (am, asig) = (uw.alpha_m[d], uw.alpha_sigma[d]);
        next.mean[d] = clip.clip((1.0 - am) * m + am * weighted_mean);
        let s = (1.0 - asig) * state.sigma[d] + asig * math::sqrt(weighted_var + SIGMA_EPS);
        next.sigma[d] = s.clamp(0.0, clip.max);
    }
    next.gen_counter = state.gen_counter + 1;
    next.best_fitness = pop
        .fitness
        .iter()
        .copied()
        .filter(|f| !f.is_nan())
        .fold(state.best_fitness, f64::min);
    Ok(next)
}

/// Truncation-selection weights: 1/E on the E best members.
pub fn fixed_rank_weights(fitness: &[f64], elite_fraction: f64) -> Result<Vec<f64>> {
    ensure_popsize(fitness.len())?;
    if !(elite_fraction > 0.0 && elite_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!("elite fraction {elite_fraction} not in (0, 1]")));
    }
    let n = fitness.len();
    // Guard against products like (2/3) * 3 = 2.0000000000000004.
    let elite = (math::ceil(elite_fraction * n as f64 - 1e-9) as usize).clamp(1, n);
    let ranks = math::ranks(fitness);
    let share = 1.0 / elite as f64;
    Ok(ranks.into_iter().map(|r| if r < elite { share } else { 0.0 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(m: &[f64], s: &[f64]) -> SearchState {
        init_state(m.len(), m, s).unwrap()
    }

    #[test]
    fn init_identity_case() {
        let st = state(&[0.0], &[1.0]);
        assert_eq!(st.mean, [0.0]);
        assert_eq!(st.sigma, [1.0]);
        assert_eq!(st.gen_counter, 0);
        assert_eq!(st.best_fitness, f64::INFINITY);
    }

    #[test]
    fn init_zero_paths() {
        let st = state(&[-5.0, 5.0], &[1.0, 1.0]);
        assert_eq!(st.path_c, Matrix::zeros(2, 3));
        assert_eq!(st.path_sigma, Matrix::zeros(2, 3));
    }

    #[test]
    fn init_rejects_mismatch() {
        assert!(matches!(
            init_state(3, &[0.0, 0.0], &[1.0, 1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ask_with_zero_sigma_returns_mean() {
        let mut st = state(&[1.5, -2.0], &[1.0, 1.0]);
        st.sigma = vec![0.0, 0.0];
        let x = ask(&st, &mut rng::stream(3), 5, &ClipBounds::default()).unwrap();
        for row in x.iter_rows() {
            assert_eq!(row, [1.5, -2.0]);
        }
    }

    #[test]
    fn ask_is_deterministic() {
        let st = state(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]);
        let a = ask(&st, &mut rng::stream(11), 8, &ClipBounds::default()).unwrap();
        let b = ask(&st, &mut rng::stream(11), 8, &ClipBounds::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ask_rejects_single_member() {
        let st = state(&[0.0], &[1.0]);
        assert_eq!(
            ask(&st, &mut rng::stream(0), 1, &ClipBounds::default()),
            Err(Error::PopulationTooSmall(1))
        );
    }

    #[test]
    fn ask_matches_moments() {
        let st = state(&[0.0], &[1.0]);
        let n = 10_000;
        let x = ask(&st, &mut rng::stream(5), n, &ClipBounds::default()).unwrap();
        let v = x.column(0);
        let mean = math::mean(&v);
        let std = math::sqrt(v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64);
        assert!(mean.abs() < 4.0 / math::sqrt(n as f64), "mean {mean}");
        assert!((std - 1.0).abs() < 0.05, "std {std}");
    }

    #[test]
    fn ask_clips_candidates() {
        let st = state(&[0.0; 4], &[100.0; 4]);
        let clip = ClipBounds { min: -1.0, max: 1.0 };
        let x = ask(&st, &mut rng::stream(1), 16, &clip).unwrap();
        assert!(x.as_slice().iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn one_hot_weight_copies_candidate() {
        let st = state(&[0.0, 0.0], &[1.0, 1.0]);
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![-3.0, 0.5], vec![0.1, 0.2]]).unwrap();
        let pop = Population::new(x, vec![2.0, 1.0, 3.0]).unwrap();
        let uw = UpdateWeights::broadcast(vec![0.0, 1.0, 0.0], 2, 1.0, 0.0);
        let next = gaussian_update(&st, &pop, &uw, &ClipBounds::default()).unwrap();
        assert_eq!(next.mean, [-3.0, 0.5]);
        assert_eq!(next.best_fitness, 1.0);
    }

    #[test]
    fn zero_learning_rate_keeps_distribution() {
        let st = state(&[0.3, -0.7], &[0.5, 2.0]);
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![-3.0, 0.5]]).unwrap();
        let pop = Population::new(x, vec![2.0, 1.0]).unwrap();
        let uw = UpdateWeights::broadcast(vec![0.5, 0.5], 2, 0.0, 0.0);
        let next = gaussian_update(&st, &pop, &uw, &ClipBounds::default()).unwrap();
        assert_eq!(next.mean, st.mean);
        assert_eq!(next.sigma, st.sigma);
        assert_eq!(next.gen_counter, 1);
    }

    #[test]
    fn symmetric_pair_hand_evaluation() {
        let st = state(&[0.0], &[1.0]);
        let x = Matrix::from_rows(&[vec![1.0], vec![-1.0]]).unwrap();
        let pop = Population::new(x, vec![0.0, 1.0]).unwrap();
        let uw = UpdateWeights::broadcast(vec![0.5, 0.5], 1, 1.0, 1.0);
        let next = gaussian_update(&st, &pop, &uw, &ClipBounds::default()).unwrap();
        assert_eq!(next.mean, [0.0]);
        // sqrt(1 + 1e-10)
        assert!((next.sigma[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn off_simplex_weights_are_rejected() {
        let st = state(&[0.0], &[1.0]);
        let x = Matrix::from_rows(&[vec![1.0], vec![-1.0]]).unwrap();
        let pop = Population::new(x, vec![0.0, 1.0]).unwrap();
        for w in [vec![0.7, 0.7], vec![1.5, -0.5]] {
            let uw = UpdateWeights::broadcast(w, 1, 1.0, 1.0);
            assert!(matches!(
                gaussian_update(&st, &pop, &uw, &ClipBounds::default()),
                Err(Error::ContractViolation(_))
            ));
        }
    }

    #[test]
    fn fixed_rank_weight_examples() {
        assert_eq!(fixed_rank_weights(&[3.0, 1.0, 2.0], 2.0 / 3.0).unwrap(), [0.0, 0.5, 0.5]);
        assert_eq!(fixed_rank_weights(&[4.0, 1.0, 2.0, 0.0], 1.0).unwrap(), [0.25; 4]);
        assert_eq!(fixed_rank_weights(&[1.0, 1.0, 2.0], 1.0 / 3.0).unwrap(), [1.0, 0.0, 0.0]);
    }
}
