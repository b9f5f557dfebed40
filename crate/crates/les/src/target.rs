//! Optimization targets named on the command line: `fn:dims[:noise]` for a
//! benchmark function (e.g. `rastrigin:5:0.05`) or `circles`.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use les_core::rng;
use les_core::tasks::{CirclesTask, FunctionId, Objective, TaskSpec, CIRCLES_PARAMS, INIT_RANGE, OFFSET_RANGE};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Target {
    Function { function: FunctionId, dims: usize, noise: f64 },
    Circles,
}

impl FromStr for Target {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("circles") {
            return Ok(Target::Circles);
        }
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            bail!("task `{s}` should look like `sphere:2`, `rastrigin:5:0.05` or `circles`");
        }
        let function: FunctionId = parts[0].parse()?;
        let dims: usize = parts[1].parse().map_err(|_| anyhow!("bad dimension in `{s}`"))?;
        if dims == 0 {
            bail!("task `{s}` needs at least one dimension");
        }
        let noise = match parts.get(2) {
            Some(v) => v.parse::<f64>().map_err(|_| anyhow!("bad noise level in `{s}`"))?,
            None => 0.0,
        };
        if !(noise >= 0.0 && noise.is_finite()) {
            bail!("noise level in `{s}` must be non-negative");
        }
        Ok(Target::Function { function, dims, noise })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Function { function, dims, noise } if *noise == 0.0 => write!(f, "{function}:{dims}"),
            Target::Function { function, dims, noise } => write!(f, "{function}:{dims}:{noise}"),
            Target::Circles => f.write_str("circles"),
        }
    }
}

/// A concrete problem ready to optimize.
pub struct Instance {
    pub objective: Box<dyn Objective + Sync>,
    pub m0: Vec<f64>,
    /// Task description for manifests; `None` for circles.
    pub spec: Option<TaskSpec>,
}

impl Target {
    /// Benchmark functions get an optimum offset and initial mean drawn
    /// from the meta-training ranges; circles starts from zero weights.
    pub fn instance(&self, seed: u64) -> Instance {
        match *self {
            Target::Function { function, dims, noise } => {
                let mut r = rng::stream(rng::derive(seed, &[0x7a5c]));
                let offset = (0..dims).map(|_| rng::uniform(&mut r, -OFFSET_RANGE, OFFSET_RANGE)).collect();
                let m0: Vec<f64> = (0..dims).map(|_| rng::uniform(&mut r, -INIT_RANGE, INIT_RANGE)).collect();
                let mut spec = TaskSpec::plain(function, m0.clone());
                spec.offset = offset;
                spec.noise_level = noise;
                spec.noise_seed = rng::derive(seed, &[0x7a5c, 1]);
                Instance { objective: Box::new(spec.clone()), m0, spec: Some(spec) }
            }
            Target::Circles => Instance {
                objective: Box::new(CirclesTask::new()),
                m0: vec![0.0; CIRCLES_PARAMS],
                spec: None,
            },
        }
    }
}

pub fn parse_list<T: FromStr<Err = E>, E: Into<anyhow::Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse::<T>().map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(
            "sphere:2".parse::<Target>().unwrap(),
            Target::Function { function: FunctionId::Sphere, dims: 2, noise: 0.0 }
        );
        assert_eq!(
            "rastrigin:5:0.05".parse::<Target>().unwrap(),
            Target::Function { function: FunctionId::Rastrigin, dims: 5, noise: 0.05 }
        );
        assert_eq!("Circles".parse::<Target>().unwrap(), Target::Circles);
        for bad in ["sphere", "sphere:0", "sphere:x", "ackley:2", "sphere:2:-1", "a:1:2:3"] {
            assert!(bad.parse::<Target>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["sphere:2", "weierstrass:4:0.1", "circles"] {
            assert_eq!(s.parse::<Target>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn instances_are_seeded() {
        let t: Target = "discus:3".parse().unwrap();
        assert_eq!(t.instance(4).m0, t.instance(4).m0);
        assert_ne!(t.instance(4).m0, t.instance(5).m0);
    }
}
