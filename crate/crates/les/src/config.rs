//! Training configuration files (TOML). Every field of the core
//! `MetaConfig` can be set; `task_set` is the only required one.

use std::fs;
use std::path::{Path, PathBuf};

use les_core::metabbo::MetaConfig;
use serde::{Deserialize, Serialize};

use crate::checkpoint::Checkpoint;

/// Problems with the configuration itself; the CLI exits with status 2.
#[derive(Debug)]
pub enum ConfigError {
    Read(PathBuf, std::io::Error),
    MissingField(&'static str),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Read(p, e) => write!(f, "cannot read config {}: {e}", p.display()),
            ConfigError::MissingField(name) => write!(f, "config is missing required field `{name}`"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

const REQUIRED: [&str; 1] = ["task_set"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileConfig {
    #[serde(flatten)]
    pub meta: MetaConfig,
    /// Checkpoint whose parameters drive the outer loop when
    /// `meta_es = "les_checkpoint"`. Relative paths resolve against the
    /// config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta_checkpoint: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg = Self::parse_unvalidated(text)?;
        cfg.meta.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads the file and, if it names a driver checkpoint, loads its
    /// parameters into `meta.meta_params`.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read(path.to_path_buf(), e))?;
        let mut cfg = Self::parse_unvalidated(&text)?;
        if let Some(ck) = &cfg.meta_checkpoint {
            let ck_path = path.parent().map(|d| d.join(ck)).unwrap_or_else(|| ck.clone());
            let ck = Checkpoint::load(&ck_path).map_err(|e| ConfigError::Invalid(format!("{e:#}")))?;
            cfg.meta.key_dim = ck.key_dim;
            cfg.meta.hidden = ck.hidden;
            cfg.meta.meta_params = Some(ck.params);
        }
        cfg.meta.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(cfg)
    }

    fn parse_unvalidated(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Invalid(e.message().to_string()))?;
        for name in REQUIRED {
            if !table.contains_key(name) {
                return Err(ConfigError::MissingField(name));
            }
        }
        table.try_into().map_err(|e: toml::de::Error| ConfigError::Invalid(e.message().to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use les_core::metabbo::MetaEsKind;
    use les_core::tasks::TaskSetName;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = FileConfig::parse("task_set = \"small\"\n").unwrap();
        assert_eq!(cfg.meta, MetaConfig::new(TaskSetName::Small));
    }

    #[test]
    fn overrides() {
        let text = r#"
task_set = "medium"
max_dims = 3
meta_population = 16
meta_tasks = 8
meta_generations = 150
meta_es = "self_referential"
aggregation = "mean"
seed = 7

[les]
attention_scale = "sqrt_popsize"
"#;
        let cfg = FileConfig::parse(text).unwrap().meta;
        assert_eq!(cfg.task_set, TaskSetName::Medium);
        assert_eq!(cfg.max_dims, Some(3));
        assert_eq!(cfg.meta_es, MetaEsKind::SelfReferential);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.meta_population, 16);
    }

    #[test]
    fn missing_task_set_is_named() {
        let err = FileConfig::parse("meta_population = 4\n").unwrap_err();
        assert!(matches!(err, ConfigError::MissingField("task_set")));
        assert!(err.to_string().contains("task_set"));
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(FileConfig::parse("task_set = \"huge\"\n").is_err());
        assert!(FileConfig::parse("task_set = \"small\"\nmeta_population = 1\n").is_err());
        assert!(FileConfig::parse("task_set = \"small\"\nmeta_es = \"les_checkpoint\"\n").is_err());
    }
}
