//! Uniform ask/tell interface over every strategy in the crate, so runners
//! and benchmarks stay strategy-agnostic.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use core::fmt;
use core::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::baselines::{CmaEs, OpenEs, Pgpe, SepCmaEs, Snes};
use crate::des::{des_step, DesConfig, DEFAULT_BETA};
use crate::error::{Error, Result};
use crate::les::{les_tell, LesConfig, LesParams};
use crate::matrix::Matrix;
use crate::search::{self, fixed_rank_weights, gaussian_update, init_state, ClipBounds, Population, SearchState, UpdateWeights};

pub trait Strategy {
    fn name(&self) -> &'static str;
    fn dims(&self) -> usize;
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix>;
    fn tell(&mut self, pop: &Population) -> Result<()>;
    fn mean(&self) -> &[f64];
    /// Lowest fitness seen so far (+inf before the first tell).
    fn best_fitness(&self) -> f64;
}

pub type BoxedStrategy = Box<dyn Strategy + Send>;

/// Learned strategy with fixed parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LesStrategy {
    pub state: SearchState,
    pub params: LesParams,
    pub cfg: LesConfig,
}

impl LesStrategy {
    pub fn new(m0: &[f64], sigma0: &[f64], params: LesParams, cfg: LesConfig) -> Result<Self> {
        Ok(Self { state: init_state(m0.len(), m0, sigma0)?, params, cfg })
    }
}

impl Strategy for LesStrategy {
    fn name(&self) -> &'static str {
        "les"
    }
    fn dims(&self) -> usize {
        self.state.dims()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        search::ask(&self.state, rng, popsize, &self.cfg.clip)
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        self.state = les_tell(&self.state, pop, &self.params, &self.cfg)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.state.mean
    }
    fn best_fitness(&self) -> f64 {
        self.state.best_fitness
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesStrategy {
    pub state: SearchState,
    pub cfg: DesConfig,
}

impl DesStrategy {
    pub fn new(m0: &[f64], cfg: DesConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { state: cfg.init_state(m0)?, cfg })
    }
}

impl Strategy for DesStrategy {
    fn name(&self) -> &'static str {
        "des"
    }
    fn dims(&self) -> usize {
        self.state.dims()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        search::ask(&self.state, rng, popsize, &self.cfg.clip)
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        self.state = des_step(&self.state, pop, &self.cfg)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.state.mean
    }
    fn best_fitness(&self) -> f64 {
        self.state.best_fitness
    }
}

/// Truncation selection over the elite fraction with fixed learning rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedWeightsStrategy {
    pub state: SearchState,
    pub elite_fraction: f64,
    pub alpha_m: f64,
    pub alpha_sigma: f64,
    pub clip: ClipBounds,
}

impl FixedWeightsStrategy {
    pub fn new(m0: &[f64], sigma0: &[f64]) -> Result<Self> {
        Ok(Self {
            state: init_state(m0.len(), m0, sigma0)?,
            elite_fraction: 0.5,
            alpha_m: 1.0,
            alpha_sigma: 0.1,
            clip: ClipBounds::default(),
        })
    }
}

impl Strategy for FixedWeightsStrategy {
    fn name(&self) -> &'static str {
        "fixed"
    }
    fn dims(&self) -> usize {
        self.state.dims()
    }
    fn ask(&self, rng: &mut dyn RngCore, popsize: usize) -> Result<Matrix> {
        search::ask(&self.state, rng, popsize, &self.clip)
    }
    fn tell(&mut self, pop: &Population) -> Result<()> {
        let sorted = pop.reordered(&pop.canonical_order());
        let w = fixed_rank_weights(&sorted.fitness, self.elite_fraction)?;
        let uw = UpdateWeights::broadcast(w, self.dims(), self.alpha_m, self.alpha_sigma);
        self.state = gaussian_update(&self.state, &sorted, &uw, &self.clip)?;
        Ok(())
    }
    fn mean(&self) -> &[f64] {
        &self.state.mean
    }
    fn best_fitness(&self) -> f64 {
        self.state.best_fitness
    }
}

/// Strategy selector, parsed from names like `des`, `des:8`, `sepcma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Les,
    Des { beta: f64 },
    FixedWeights,
    OpenEs,
    Pgpe,
    Snes,
    SepCmaEs,
    CmaEs,
}

impl StrategyKind {
    pub const NAMES: [&'static str; 8] = ["les", "des", "fixed", "openes", "pgpe", "snes", "sepcma", "cma"];
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Les => f.write_str("les"),
            StrategyKind::Des { beta } if *beta == DEFAULT_BETA => f.write_str("des"),
            StrategyKind::Des { beta } => write!(f, "des:{beta}"),
            StrategyKind::FixedWeights => f.write_str("fixed"),
            StrategyKind::OpenEs => f.write_str("openes"),
            StrategyKind::Pgpe => f.write_str("pgpe"),
            StrategyKind::Snes => f.write_str("snes"),
            StrategyKind::SepCmaEs => f.write_str("sepcma"),
            StrategyKind::CmaEs => f.write_str("cma"),
        }
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (head, arg) = match lower.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (lower.as_str(), None),
        };
        let kind = match head {
            "les" => StrategyKind::Les,
            "des" => {
                let beta = match arg {
                    Some(a) => a.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad DES temperature `{a}`")))?,
                    None => DEFAULT_BETA,
                };
                return Ok(StrategyKind::Des { beta });
            }
            "fixed" => StrategyKind::FixedWeights,
            "openes" => StrategyKind::OpenEs,
            "pgpe" => StrategyKind::Pgpe,
            "snes" => StrategyKind::Snes,
            "sepcma" | "sep-cma-es" => StrategyKind::SepCmaEs,
            "cma" | "cma-es" | "cmaes" => StrategyKind::CmaEs,
            _ => return Err(Error::InvalidArgument(format!("unknown strategy `{s}`"))),
        };
        if arg.is_some() {
            return Err(Error::InvalidArgument(format!("strategy `{head}` takes no argument")));
        }
        Ok(kind)
    }
}

pub fn build_strategy(
    kind: StrategyKind,
    m0: &[f64],
    sigma0: f64,
    les_params: Option<&LesParams>,
    les_cfg: &LesConfig,
) -> Result<BoxedStrategy> {
    let dims = m0.len();
    let sigma = vec![sigma0; dims];
    Ok(match kind {
        StrategyKind::Les => {
            let params = les_params.cloned().unwrap_or_else(LesParams::default_zeros);
            Box::new(LesStrategy::new(m0, &sigma, params, les_cfg.clone())?)
        }
        StrategyKind::Des { beta } => {
            let mut cfg = DesConfig::new(dims).with_beta(beta);
            cfg.sigma0 = sigma;
            Box::new(DesStrategy::new(m0, cfg)?)
        }
        StrategyKind::FixedWeights => Box::new(FixedWeightsStrategy::new(m0, &sigma)?),
        StrategyKind::OpenEs => Box::new(OpenEs::new(m0, sigma0)?),
        StrategyKind::Pgpe => Box::new(Pgpe::new(m0, sigma0)?),
        StrategyKind::Snes => Box::new(Snes::new(m0, sigma0)?),
        StrategyKind::SepCmaEs => Box::new(SepCmaEs::new(m0, sigma0)?),
        StrategyKind::CmaEs => Box::new(CmaEs::new(m0, sigma0)?),
    })
}

pub(crate) fn best_of(prev: f64, fitness: &[f64]) -> f64 {
    fitness.iter().copied().filter(|f| !f.is_nan()).fold(prev, f64::min)
}

pub(crate) fn check_sigma0(sigma0: f64) -> Result<()> {
    if sigma0 > 0.0 && sigma0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("initial sigma must be positive, got {sigma0}")))
    }
}
