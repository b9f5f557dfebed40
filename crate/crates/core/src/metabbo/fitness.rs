use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::shaping::zscore;

/// How per-task normalized scores are combined into one meta-fitness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Median,
    Mean,
}

/// Raw inner-loop fitness for every (member, task) pair. Each entry is a
/// generations-by-popsize matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreTensor {
    pub members: usize,
    pub tasks: usize,
    /// Member-major: entry `i * tasks + k`.
    pub rollouts: Vec<Matrix>,
}

impl ScoreTensor {
    pub fn new(members: usize, tasks: usize, rollouts: Vec<Matrix>) -> Result<Self> {
        if rollouts.len() != members * tasks {
            return Err(Error::DimensionMismatch { expected: members * tasks, actual: rollouts.len() });
        }
        Ok(Self { members, tasks, rollouts })
    }

    pub fn get(&self, member: usize, task: usize) -> &Matrix {
        &self.rollouts[member * self.tasks + task]
    }

    /// Best fitness of each rollout, as a tasks-by-members matrix.
    pub fn minima(&self) -> Matrix {
        let mut out = Matrix::zeros(self.tasks, self.members);
        for i in 0..self.members {
            for k in 0..self.tasks {
                out[(k, i)] = rollout_min(self.get(i, k));
            }
        }
        out
    }
}

/// Minimum over generations and members; NaN counts as +inf.
pub fn rollout_min(scores: &Matrix) -> f64 {
    scores.as_slice().iter().map(|f| if f.is_nan() { f64::INFINITY } else { *f }).fold(f64::INFINITY, f64::min)
}

pub fn meta_fitness(raw: &ScoreTensor, agg: Aggregation) -> Result<Vec<f64>> {
    meta_fitness_from_minima(&raw.minima(), agg)
}

/// Z-scores each task row across members, then aggregates over tasks.
/// Lower is better. Non-finite entries take the worst finite score of their
/// task; a task where every member scores the same contributes zeros.
pub fn meta_fitness_from_minima(minima: &Matrix, agg: Aggregation) -> Result<Vec<f64>> {
    let (tasks, members) = (minima.rows(), minima.cols());
    if members < 2 {
        return Err(Error::PopulationTooSmall(members));
    }
    if tasks == 0 {
        return Err(Error::InvalidArgument("meta-fitness needs at least one task".into()));
    }
    let mut normalized = Matrix::zeros(tasks, members);
    for k in 0..tasks {
        let row = minima.row(k);
        let worst = row.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        if worst == f64::NEG_INFINITY {
            continue;
        }
        let filled: Vec<f64> = row.iter().map(|v| if v.is_finite() { *v } else { worst }).collect();
        normalized.row_mut(k).copy_from_slice(&zscore(&filled)?);
    }
    Ok((0..members)
        .map(|i| {
            let col = normalized.column(i);
            match agg {
                Aggregation::Median => math::median(&col),
                Aggregation::Mean => math::mean(&col),
            }
        })
        .collect())
}

/// Relative gap `(s - r) / (|s| + |r|)` of a score against a reference, in
/// [-1, 1]; negative means better than the reference.
pub fn relative_gap(score: f64, reference: f64) -> f64 {
    match (score.is_finite(), reference.is_finite()) {
        (true, true) => (score - reference) / (math::abs(score) + math::abs(reference) + 1e-12),
        (false, true) => 1.0,
        (true, false) => -1.0,
        (false, false) => 0.0,
    }
}

/// Median relative gap of each member over tasks. Unlike the z-scored
/// meta-fitness this is comparable across meta-generations.
pub fn reference_gaps(minima: &Matrix, reference: &[f64]) -> Result<Vec<f64>> {
    crate::error::ensure_len(minima.rows(), reference.len())?;
    let mut col = vec![0.0; minima.rows()];
    Ok((0..minima.cols())
        .map(|i| {
            for (k, c) in col.iter_mut().enumerate() {
                *c = relative_gap(minima[(k, i)], reference[k]);
            }
            math::median(&col)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn tensor_from(minima: &Matrix) -> ScoreTensor {
        let (k, m) = (minima.rows(), minima.cols());
        let mut rollouts = Vec::new();
        for i in 0..m {
            for t in 0..k {
                // put the minimum somewhere inside a larger matrix
                let v = minima[(t, i)];
                let mut g = Matrix::from_vec(3, 4, vec![v + 1.0; 12]).unwrap();
                g[(1, 2)] = v;
                rollouts.push(g);
            }
        }
        ScoreTensor::new(m, k, rollouts).unwrap()
    }

    /// Direct transcription of the definition, without shared helpers.
    fn brute_force(minima: &Matrix) -> Vec<f64> {
        let (k, m) = (minima.rows(), minima.cols());
        let mut z = vec![vec![0.0; m]; k];
        for t in 0..k {
            let row = minima.row(t);
            let mu = row.iter().sum::<f64>() / m as f64;
            let sd = (row.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / m as f64).sqrt();
            for i in 0..m {
                z[t][i] = if sd == 0.0 { 0.0 } else { (row[i] - mu) / (sd + 1e-10) };
            }
        }
        (0..m)
            .map(|i| {
                let mut c: Vec<f64> = (0..k).map(|t| z[t][i]).collect();
                c.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if k % 2 == 1 {
                    c[k / 2]
                } else {
                    (c[k / 2 - 1] + c[k / 2]) / 2.0
                }
            })
            .collect()
    }

    #[test]
    fn two_members_one_task() {
        let m = Matrix::from_rows(&[vec![1.0, 3.0]]).unwrap();
        let out = meta_fitness(&tensor_from(&m), Aggregation::Median).unwrap();
        assert!((out[0] + 1.0).abs() < 1e-9 && (out[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_members_score_zero() {
        let m = Matrix::from_rows(&[vec![2.0; 4], vec![-1.0; 4]]).unwrap();
        assert_eq!(meta_fitness_from_minima(&m, Aggregation::Median).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn non_finite_takes_worst() {
        let m = Matrix::from_rows(&[vec![1.0, f64::INFINITY, 3.0]]).unwrap();
        let out = meta_fitness_from_minima(&m, Aggregation::Median).unwrap();
        assert_eq!(out[1], out[2]);
        assert!(out[0] < out[1]);
        let nan = Matrix::from_vec(2, 2, vec![f64::NAN, 1.0, 1.0, 1.0]).unwrap();
        assert!(rollout_min(&nan) == 1.0);
    }

    #[test]
    fn needs_two_members() {
        let m = Matrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(meta_fitness_from_minima(&m, Aggregation::Median).is_err());
    }

    #[test]
    fn matches_brute_force() {
        let mut r = rng::stream(21);
        for (k, m) in [(1, 2), (2, 3), (3, 5), (4, 4), (7, 9)] {
            let data = (0..k * m).map(|_| rng::normal(&mut r) * 10.0).collect();
            let mins = Matrix::from_vec(k, m, data).unwrap();
            let ours = meta_fitness(&tensor_from(&mins), Aggregation::Median).unwrap();
            for (a, b) in ours.iter().zip(brute_force(&mins)) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gaps() {
        assert_eq!(relative_gap(1.0, 1.0), 0.0);
        assert!((relative_gap(0.0, 2.0) + 1.0).abs() < 1e-9);
        assert_eq!(relative_gap(f64::INFINITY, 2.0), 1.0);
        let m = Matrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 2.0], vec![0.0, 4.0]]).unwrap();
        let g = reference_gaps(&m, &[2.0, 2.0, 2.0]).unwrap();
        assert!((g[0] + 1.0 / 3.0).abs() < 1e-9);
        assert!((g[1] - 0.2).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn affine_per_task_invariance(
            data in proptest::collection::vec(-50.0f64..50.0, 12),
            scales in proptest::collection::vec((0.1f64..10.0, -20.0f64..20.0), 3),
        ) {
            let mins = Matrix::from_vec(3, 4, data).unwrap();
            let mut moved = mins.clone();
            for k in 0..3 {
                for i in 0..4 {
                    moved[(k, i)] = scales[k].0 * mins[(k, i)] + scales[k].1;
                }
            }
            let a = meta_fitness_from_minima(&mins, Aggregation::Median).unwrap();
            let b = meta_fitness_from_minima(&moved, Aggregation::Median).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-6);
            }
        }

        #[test]
        fn member_permutation_equivariance(data in proptest::collection::vec(-50.0f64..50.0, 10), shift in 1usize..5) {
            let mins = Matrix::from_vec(2, 5, data).unwrap();
            let perm: Vec<usize> = (0..5).map(|i| (i + shift) % 5).collect();
            let mut permuted = Matrix::zeros(2, 5);
            for k in 0..2 {
                for (i, &p) in perm.iter().enumerate() {
                    permuted[(k, i)] = mins[(k, p)];
                }
            }
            let a = meta_fitness_from_minima(&mins, Aggregation::Mean).unwrap();
            let b = meta_fitness_from_minima(&permuted, Aggregation::Mean).unwrap();
            for (i, &p) in perm.iter().enumerate() {
                prop_assert_eq!(b[i], a[p]);
            }
        }
    }
}
