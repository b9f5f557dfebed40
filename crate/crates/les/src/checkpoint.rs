//! Parameter checkpoints: a small JSON document holding the network shape,
//! the options that change how the parameters are read, and the flat
//! parameter vector. Floats are written in shortest round-trip form, so a
//! save/load cycle is exact.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use les_core::les::{AttentionScale, LesConfig, LesParams, PathConvention};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub key_dim: usize,
    pub hidden: usize,
    pub attention_scale: AttentionScale,
    pub path_convention: PathConvention,
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl Checkpoint {
    pub fn new(params: &LesParams, cfg: &LesConfig) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            key_dim: params.key_dim,
            hidden: params.hidden,
            attention_scale: cfg.attention_scale,
            path_convention: cfg.path_convention,
            params: params.flatten(),
            manifest: None,
        }
    }

    pub fn with_manifest(mut self, manifest: impl Into<String>) -> Self {
        self.manifest = Some(manifest.into());
        self
    }

    pub fn params(&self) -> Result<LesParams> {
        Ok(LesParams::unflatten(self.key_dim, self.hidden, &self.params)?)
    }

    /// Strategy configuration matching the options the parameters were trained with.
    pub fn les_config(&self) -> LesConfig {
        LesConfig { attention_scale: self.attention_scale, path_convention: self.path_convention, ..LesConfig::default() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ck: Checkpoint = serde_json::from_str(text)?;
        if ck.format_version != FORMAT_VERSION {
            bail!("unsupported checkpoint format version {}", ck.format_version);
        }
        if ck.params.iter().any(|p| !p.is_finite()) {
            bail!("checkpoint contains non-finite parameters");
        }
        ck.params()?;
        Ok(ck)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing checkpoint {}", path.display()))
    }
}
