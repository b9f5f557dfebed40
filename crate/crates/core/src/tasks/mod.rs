//! Objectives: benchmark functions, the randomized task distribution used
//! for meta-training, and the circles classifier.

mod bbob;
mod circles;

pub use bbob::{eval_function, FunctionId, SCHWEFEL_OPT};
pub use circles::{circles_task, CirclesTask, CIRCLES_DATA_SEED, CIRCLES_NOISE, CIRCLES_PARAMS, CIRCLES_POINTS};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::matrix::Matrix;
use crate::rng;

pub const OFFSET_RANGE: f64 = 5.0;
pub const INIT_RANGE: f64 = 5.0;
pub const MAX_NOISE: f64 = 0.1;
pub const MAX_START_GENERATION: u64 = 2000;

/// Anything a strategy can be run against. Rows of `x` are candidates;
/// `eval_seed` keys any evaluation noise.
pub trait Objective {
    fn dims(&self) -> usize;
    fn evaluate(&self, x: &Matrix, eval_seed: u64) -> Result<Vec<f64>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskSetName {
    Small,
    Medium,
    Large,
}

impl fmt::Display for TaskSetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskSetName::Small => "small",
            TaskSetName::Medium => "medium",
            TaskSetName::Large => "large",
        })
    }
}

impl FromStr for TaskSetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(TaskSetName::Small),
            "medium" => Ok(TaskSetName::Medium),
            "large" => Ok(TaskSetName::Large),
            _ => Err(Error::InvalidArgument(format!("unknown task set `{s}`"))),
        }
    }
}

/// Distribution over meta-training problems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSet {
    pub name: TaskSetName,
    pub functions: Vec<FunctionId>,
    pub min_dims: usize,
    pub max_dims: usize,
    /// Inner-loop generations per rollout.
    pub horizon: usize,
}

impl TaskSet {
    pub fn named(name: TaskSetName) -> Self {
        use FunctionId::*;
        match name {
            TaskSetName::Small => Self { name, functions: alloc::vec![Sphere], min_dims: 2, max_dims: 2, horizon: 25 },
            TaskSetName::Medium => Self {
                name,
                functions: alloc::vec![Sphere, Rosenbrock, Discus, Rastrigin, Schwefel],
                min_dims: 1,
                max_dims: 5,
                horizon: 25,
            },
            TaskSetName::Large => Self { name, functions: FunctionId::ALL.to_vec(), min_dims: 1, max_dims: 10, horizon: 50 },
        }
    }

    /// Caps the dimension range, keeping at least `min_dims`.
    pub fn with_max_dims(mut self, max_dims: usize) -> Self {
        self.max_dims = max_dims.max(self.min_dims).min(self.max_dims);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(Error::InvalidArgument("task set has no functions".into()));
        }
        if self.min_dims == 0 || self.min_dims > self.max_dims {
            return Err(Error::InvalidArgument(format!("bad dimension range {}..={}", self.min_dims, self.max_dims)));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(())
    }
}

/// One problem instance: `f(x + offset) + noise_level * N(0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub function: FunctionId,
    pub dims: usize,
    pub offset: Vec<f64>,
    pub noise_level: f64,
    pub m0: Vec<f64>,
    pub t0: u64,
    pub sigma0: f64,
    pub noise_seed: u64,
}

impl TaskSpec {
    /// Noiseless, unshifted instance starting at `m0`.
    pub fn plain(function: FunctionId, m0: Vec<f64>) -> Self {
        let dims = m0.len();
        Self {
            function,
            dims,
            offset: alloc::vec![0.0; dims],
            noise_level: 0.0,
            m0,
            t0: 0,
            sigma0: 1.0,
            noise_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_len(self.dims, self.offset.len())?;
        ensure_len(self.dims, self.m0.len())?;
        if self.dims == 0 {
            return Err(Error::InvalidArgument("task needs at least one dimension".into()));
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad noise level {}", self.noise_level)));
        }
        Ok(())
    }

    /// Short human-readable label, e.g. `rastrigin:3`.
    pub fn label(&self) -> String {
        format!("{}:{}", self.function, self.dims)
    }
}

pub fn sample_task<R: Rng + ?Sized>(rng: &mut R, set: &TaskSet) -> TaskSpec {
    let function = set.functions[rng.random_range(0..set.functions.len())];
    let dims = rng.random_range(set.min_dims..=set.max_dims);
    let offset = (0..dims).map(|_| rng::uniform(rng, -OFFSET_RANGE, OFFSET_RANGE)).collect();
    let noise_level = rng::uniform(rng, 0.0, MAX_NOISE);
    let m0 = (0..dims).map(|_| rng::uniform(rng, -INIT_RANGE, INIT_RANGE)).collect();
    let t0 = rng.random_range(0..=MAX_START_GENERATION);
    let noise_seed = rng.next_u64();
    TaskSpec { function, dims, offset, noise_level, m0, t0, sigma0: 1.0, noise_seed }
}

/// Fitness of candidate `index` under evaluation key `eval_seed`. The noise
/// draw depends only on `(noise_seed, eval_seed, index)`.
pub fn eval_task(spec: &TaskSpec, x: &[f64], eval_seed: u64, index: u64) -> Result<f64> {
    ensure_len(spec.dims, x.len())?;
    let shifted: Vec<f64> = x.iter().zip(&spec.offset).map(|(a, z)| a + z).collect();
    let clean = eval_function(spec.function, &shifted)?;
    if spec.noise_level == 0.0 {
        return Ok(clean);
    }
    let mut r = rng::stream(rng::derive(spec.noise_seed, &[eval_seed, index]));
    Ok(clean + spec.noise_level * rng::normal(&mut r))
}

impl Objective for TaskSpec {
    fn dims(&self) -> usize {
        self.dims
    }
    fn evaluate(&self, x: &Matrix, eval_seed: u64) -> Result<Vec<f64>> {
        x.iter_rows().enumerate().map(|(i, row)| eval_task(self, row, eval_seed, i as u64)).collect()
    }
}

impl Objective for CirclesTask {
    fn dims(&self) -> usize {
        CIRCLES_PARAMS
    }
    fn evaluate(&self, x: &Matrix, _eval_seed: u64) -> Result<Vec<f64>> {
        x.iter_rows().map(|row| self.loss(row)).collect()
    }
}
