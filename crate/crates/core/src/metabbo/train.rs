use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::fitness::{meta_fitness_from_minima, reference_gaps, rollout_min, Aggregation};
use super::rollout::{inner_rollout, RolloutExecutor};
use crate::baselines::CmaEs;
use crate::error::{Error, Result};
use crate::les::{param_count, LesConfig, LesParams, DEFAULT_HIDDEN, DEFAULT_KEY_DIM};
use crate::math;
use crate::matrix::Matrix;
use crate::rng;
use crate::search::Population;
use crate::strategy::{LesStrategy, Strategy};
use crate::tasks::{sample_task, TaskSet, TaskSetName, TaskSpec};

/// Outer-loop optimizer over the learned strategy's parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaEsKind {
    #[default]
    CmaEs,
    /// A learned strategy with fixed, previously trained parameters.
    LesCheckpoint,
    /// A learned strategy whose parameters are periodically replaced by the
    /// best parameters it has found.
    SelfReferential,
}

fn d_meta_population() -> usize {
    256
}
fn d_meta_tasks() -> usize {
    128
}
fn d_inner_popsize() -> usize {
    16
}
fn d_meta_generations() -> usize {
    1500
}
fn d_meta_sigma0() -> f64 {
    0.1
}
fn d_key_dim() -> usize {
    DEFAULT_KEY_DIM
}
fn d_hidden() -> usize {
    DEFAULT_HIDDEN
}
fn d_replace_every() -> usize {
    5
}
fn d_init_scale() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    pub task_set: TaskSetName,
    /// Caps the task set's dimension range.
    #[serde(default)]
    pub max_dims: Option<usize>,
    /// Inner generations per rollout; defaults to the task set's horizon.
    #[serde(default)]
    pub inner_generations: Option<usize>,
    #[serde(default = "d_meta_population")]
    pub meta_population: usize,
    #[serde(default = "d_meta_tasks")]
    pub meta_tasks: usize,
    #[serde(default = "d_inner_popsize")]
    pub inner_popsize: usize,
    #[serde(default = "d_meta_generations")]
    pub meta_generations: usize,
    #[serde(default)]
    pub meta_es: MetaEsKind,
    #[serde(default = "d_meta_sigma0")]
    pub meta_sigma0: f64,
    #[serde(default)]
    pub aggregation: Aggregation,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_key_dim")]
    pub key_dim: usize,
    #[serde(default = "d_hidden")]
    pub hidden: usize,
    /// Configuration of the inner strategy being trained.
    #[serde(default)]
    pub les: LesConfig,
    /// Self-referential replacement period in meta-generations; 0 disables.
    #[serde(default = "d_replace_every")]
    pub replace_every: usize,
    /// Scale of the random initial parameters of the self-referential driver.
    #[serde(default = "d_init_scale")]
    pub selfref_init_scale: f64,
    /// Flat parameters driving the outer loop when `meta_es = les_checkpoint`.
    #[serde(default)]
    pub meta_params: Option<Vec<f64>>,
}

impl MetaConfig {
    pub fn new(task_set: TaskSetName) -> Self {
        Self {
            task_set,
            max_dims: None,
            inner_generations: None,
            meta_population: d_meta_population(),
            meta_tasks: d_meta_tasks(),
            inner_popsize: d_inner_popsize(),
            meta_generations: d_meta_generations(),
            meta_es: MetaEsKind::default(),
            meta_sigma0: d_meta_sigma0(),
            aggregation: Aggregation::default(),
            seed: 0,
            key_dim: d_key_dim(),
            hidden: d_hidden(),
            les: LesConfig::default(),
            replace_every: d_replace_every(),
            selfref_init_scale: d_init_scale(),
            meta_params: None,
        }
    }

    pub fn tasks(&self) -> TaskSet {
        let set = TaskSet::named(self.task_set);
        match self.max_dims {
            Some(d) => set.with_max_dims(d),
            None => set,
        }
    }

    pub fn horizon(&self) -> usize {
        self.inner_generations.unwrap_or_else(|| self.tasks().horizon)
    }

    pub fn param_dims(&self) -> usize {
        param_count(self.key_dim, self.hidden)
    }

    pub fn validate(&self) -> Result<()> {
        self.tasks().validate()?;
        let bad = |what: &str| Err(Error::InvalidArgument(format!("invalid {what}")));
        if self.meta_population < 2 {
            return Err(Error::PopulationTooSmall(self.meta_population));
        }
        if self.inner_popsize < 2 {
            return Err(Error::PopulationTooSmall(self.inner_popsize));
        }
        if self.meta_tasks == 0 {
            return bad("meta_tasks (must be at least 1)");
        }
        if self.horizon() == 0 {
            return bad("inner_generations (must be at least 1)");
        }
        if !(self.meta_sigma0 > 0.0 && self.meta_sigma0.is_finite()) {
            return bad("meta_sigma0");
        }
        if self.key_dim == 0 || self.hidden == 0 {
            return bad("network size");
        }
        match (self.meta_es, &self.meta_params) {
            (MetaEsKind::LesCheckpoint, None) => return bad("meta_params (required by les_checkpoint)"),
            (MetaEsKind::LesCheckpoint, Some(p)) if p.len() != self.param_dims() => {
                return Err(Error::DimensionMismatch { expected: self.param_dims(), actual: p.len() })
            }
            _ => {}
        }
        Ok(())
    }
}

/// One line of the training log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaRecord {
    pub generation: usize,
    pub seed: u64,
    /// Lowest meta-fitness in this generation.
    #[serde(with = "crate::serde_f64")]
    pub best: f64,
    #[serde(with = "crate::serde_f64")]
    pub median: f64,
    /// Running minimum of `best`.
    #[serde(with = "crate::serde_f64")]
    pub best_so_far: f64,
    pub best_member: usize,
    /// Best member's median relative gap to the zero-parameter strategy.
    #[serde(with = "crate::serde_f64")]
    pub ref_gap_best: f64,
    #[serde(with = "crate::serde_f64")]
    pub ref_gap_median: f64,
    /// Whether the self-referential driver swapped parameters this generation.
    pub replaced: bool,
    pub meta_sigma_mean: f64,
    pub meta_sigma_min: f64,
    pub meta_sigma_max: f64,
    /// Hash of the tasks and rollout seeds shared by all members.
    pub task_digest: String,
}

/// Tasks and seeds of one meta-generation, shared by every member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationPlan {
    pub seed: u64,
    pub tasks: Vec<TaskSpec>,
    pub rollout_seeds: Vec<u64>,
    pub ask_seed: u64,
}

impl GenerationPlan {
    pub fn new(master: u64, generation: usize, set: &TaskSet, count: usize) -> Self {
        let seed = rng::derive(master, &[generation as u64]);
        let mut task_rng = rng::stream(rng::derive(seed, &[0]));
        let tasks = (0..count).map(|_| sample_task(&mut task_rng, set)).collect();
        let rollout_seeds = (0..count as u64).map(|k| rng::derive(seed, &[1, k])).collect();
        Self { seed, tasks, rollout_seeds, ask_seed: rng::derive(seed, &[2]) }
    }

    /// FNV-1a over every task field and rollout seed.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: u64| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for (t, s) in self.tasks.iter().zip(&self.rollout_seeds) {
            eat(t.function as u64);
            eat(t.dims as u64);
            t.offset.iter().chain(&t.m0).for_each(|v| eat(v.to_bits()));
            eat(t.noise_level.to_bits());
            eat(t.sigma0.to_bits());
            eat(t.t0);
            eat(t.noise_seed);
            eat(*s);
        }
        h
    }
}

/// The outer-loop search distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaDriver {
    Cma(CmaEs),
    Les(LesStrategy),
}

impl MetaDriver {
    fn as_strategy(&self) -> &dyn Strategy {
        match self {
            MetaDriver::Cma(s) => s,
            MetaDriver::Les(s) => s,
        }
    }

    fn as_strategy_mut(&mut self) -> &mut dyn Strategy {
        match self {
            MetaDriver::Cma(s) => s,
            MetaDriver::Les(s) => s,
        }
    }

    /// Per-coordinate sampling scale.
    pub fn scales(&self) -> Vec<f64> {
        match self {
            MetaDriver::Cma(s) => (0..s.mean.len()).map(|i| s.sigma * math::sqrt(s.cov[(i, i)])).collect(),
            MetaDriver::Les(s) => s.state.sigma.clone(),
        }
    }

    pub fn mean(&self) -> &[f64] {
        self.as_strategy().mean()
    }
}

/// Resumable meta-training state. Stepping a restored copy gives the same
/// records as stepping the original.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaTrainer {
    pub cfg: MetaConfig,
    pub generation: usize,
    pub driver: MetaDriver,
    #[serde(with = "crate::serde_f64")]
    pub best_so_far: f64,
    /// Lowest reference gap seen so far and the parameters that achieved it.
    #[serde(with = "crate::serde_f64")]
    pub best_gap: f64,
    pub best_params: Vec<f64>,
    /// Self-referential bookkeeping: the gap of the current driver
    /// parameters and the best candidate of the running window.
    #[serde(with = "crate::serde_f64")]
    pub incumbent_gap: f64,
    #[serde(with = "crate::serde_f64")]
    pub window_gap: f64,
    pub window_params: Vec<f64>,
}

pub struct MetaOutcome {
    /// Parameters with the lowest reference gap seen during training.
    pub best: LesParams,
    /// Final mean of the outer search distribution.
    pub mean: LesParams,
    pub log: Vec<MetaRecord>,
}

/// Initial parameters of the self-referential driver.
pub fn selfref_init(cfg: &MetaConfig) -> LesParams {
    let mut r = rng::stream(rng::derive(cfg.seed, &[u64::MAX]));
    LesParams::random(&mut r, cfg.key_dim, cfg.hidden, cfg.selfref_init_scale)
}

impl MetaTrainer {
    pub fn new(cfg: MetaConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.param_dims();
        let mean = vec![0.0; n];
        let driver_les = |params: LesParams| -> Result<MetaDriver> {
            Ok(MetaDriver::Les(LesStrategy::new(&mean, &vec![cfg.meta_sigma0; n], params, LesConfig::default())?))
        };
        let driver = match cfg.meta_es {
            MetaEsKind::CmaEs => MetaDriver::Cma(CmaEs::new(&mean, cfg.meta_sigma0)?),
            MetaEsKind::LesCheckpoint => {
                let flat = cfg.meta_params.as_deref().unwrap_or_default();
                driver_les(LesParams::unflatten(cfg.key_dim, cfg.hidden, flat)?)?
            }
            MetaEsKind::SelfReferential => driver_les(selfref_init(&cfg))?,
        };
        Ok(Self {
            generation: 0,
            driver,
            best_so_far: f64::INFINITY,
            best_gap: f64::INFINITY,
            best_params: mean.clone(),
            incumbent_gap: f64::INFINITY,
            window_gap: f64::INFINITY,
            window_params: Vec::new(),
            cfg,
        })
    }

    pub fn plan(&self, generation: usize) -> GenerationPlan {
        GenerationPlan::new(self.cfg.seed, generation, &self.cfg.tasks(), self.cfg.meta_tasks)
    }

    pub fn is_done(&self) -> bool {
        self.generation >= self.cfg.meta_generations
    }

    /// Best-of-rollout scores, tasks by members. Column `members` (the last
    /// one) holds the zero-parameter reference strategy.
    fn score(&self, plan: &GenerationPlan, thetas: &[LesParams], exec: &dyn RolloutExecutor) -> Result<Matrix> {
        let k = plan.tasks.len();
        let cols = thetas.len() + 1;
        let reference = LesParams::zeros(self.cfg.key_dim, self.cfg.hidden);
        let horizon = self.cfg.horizon();
        let job = |j: usize| -> Result<f64> {
            let (task, member) = (j / cols, j % cols);
            let params = thetas.get(member).unwrap_or(&reference);
            let raw = inner_rollout(
                params,
                &self.cfg.les,
                &plan.tasks[task],
                horizon,
                self.cfg.inner_popsize,
                plan.rollout_seeds[task],
            )?;
            Ok(rollout_min(&raw))
        };
        Matrix::from_vec(k, cols, exec.map(k * cols, &job)?)
    }

    pub fn step(&mut self, exec: &dyn RolloutExecutor) -> Result<MetaRecord> {
        let g = self.generation;
        let plan = self.plan(g);
        let m = self.cfg.meta_population;
        let x = self.driver.as_strategy().ask(&mut rng::stream(plan.ask_seed), m)?;
        let thetas = x
            .iter_rows()
            .map(|row| LesParams::unflatten(self.cfg.key_dim, self.cfg.hidden, row))
            .collect::<Result<Vec<_>>>()?;

        let scores = self.score(&plan, &thetas, exec)?;
        let k = plan.tasks.len();
        let members = Matrix::from_rows(&(0..k).map(|t| scores.row(t)[..m].to_vec()).collect::<Vec<_>>())?;
        let reference = scores.column(m);
        let fitness = meta_fitness_from_minima(&members, self.cfg.aggregation)?;
        let gaps = reference_gaps(&members, &reference)?;

        let best_member = fitness
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let best = fitness[best_member];
        self.best_so_far = self.best_so_far.min(best);
        let gap = gaps[best_member];
        if gap < self.best_gap {
            self.best_gap = gap;
            self.best_params = x.row(best_member).to_vec();
        }
        if gap < self.window_gap {
            self.window_gap = gap;
            self.window_params = x.row(best_member).to_vec();
        }

        self.driver.as_strategy_mut().tell(&Population::new(x, fitness.clone())?)?;
        let replaced = self.maybe_replace(g)?;

        let scales = self.driver.scales();
        let record = MetaRecord {
            generation: g,
            seed: plan.seed,
            best,
            median: math::median(&fitness),
            best_so_far: self.best_so_far,
            best_member,
            ref_gap_best: gap,
            ref_gap_median: math::median(&gaps),
            replaced,
            meta_sigma_mean: math::mean(&scales),
            meta_sigma_min: scales.iter().copied().fold(f64::INFINITY, f64::min),
            meta_sigma_max: scales.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            task_digest: format!("{:016x}", plan.digest()),
        };
        self.generation += 1;
        Ok(record)
    }

    /// At the end of each replacement window, adopt the window's best
    /// parameters as the driver if they beat the incumbent, re-centre the
    /// search on them and reset its scale.
    fn maybe_replace(&mut self, g: usize) -> Result<bool> {
        let every = self.cfg.replace_every;
        if self.cfg.meta_es != MetaEsKind::SelfReferential || every == 0 || (g + 1) % every != 0 {
            return Ok(false);
        }
        let improved = self.window_gap < self.incumbent_gap;
        if improved {
            let MetaDriver::Les(s) = &mut self.driver else {
                return Err(Error::ContractViolation("self-referential driver must be a learned strategy".into()));
            };
            s.params = LesParams::unflatten(self.cfg.key_dim, self.cfg.hidden, &self.window_params)?;
            s.state.mean.clone_from(&self.window_params);
            s.state.sigma = vec![self.cfg.meta_sigma0; self.window_params.len()];
            self.incumbent_gap = self.window_gap;
        }
        self.window_gap = f64::INFINITY;
        self.window_params.clear();
        Ok(improved)
    }

    pub fn outcome(&self, log: Vec<MetaRecord>) -> Result<MetaOutcome> {
        Ok(MetaOutcome {
            best: LesParams::unflatten(self.cfg.key_dim, self.cfg.hidden, &self.best_params)?,
            mean: LesParams::unflatten(self.cfg.key_dim, self.cfg.hidden, self.driver.mean())?,
            log,
        })
    }

    /// Steps until `meta_generations` is reached, handing each record to
    /// `on_record` as it is produced.
    pub fn run(&mut self, exec: &dyn RolloutExecutor, mut on_record: impl FnMut(&Self, &MetaRecord)) -> Result<Vec<MetaRecord>> {
        let mut log = Vec::new();
        while !self.is_done() {
            let rec = self.step(exec)?;
            on_record(self, &rec);
            log.push(rec);
        }
        Ok(log)
    }
}

pub fn metabbo_run(cfg: MetaConfig, exec: &dyn RolloutExecutor) -> Result<MetaOutcome> {
    let mut t = MetaTrainer::new(cfg)?;
    let log = t.run(exec, |_, _| {})?;
    t.outcome(log)
}

pub fn selfref_run(mut cfg: MetaConfig, exec: &dyn RolloutExecutor) -> Result<MetaOutcome> {
    if cfg.meta_es != MetaEsKind::SelfReferential {
        cfg.meta_es = MetaEsKind::SelfReferential;
    }
    metabbo_run(cfg, exec)
}
