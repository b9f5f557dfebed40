//! Meta-training logs (one JSON record per line) and resumable trainer state.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use les_core::metabbo::{MetaRecord, MetaTrainer};

pub const LOG_FILE: &str = "log.jsonl";
pub const STATE_FILE: &str = "state.json";

pub struct LogWriter {
    file: File,
}

impl LogWriter {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(Self { file: File::create(path).with_context(|| format!("creating {}", path.display()))? })
    }

    /// Opens an existing log, keeping only its first `keep` records.
    pub fn resume(path: &Path, keep: usize) -> Result<Self> {
        let records = read_log(path)?;
        let mut w = Self::create(path)?;
        for r in records.iter().take(keep) {
            w.append(r)?;
        }
        w.file = OpenOptions::new().append(true).open(path)?;
        Ok(w)
    }

    pub fn append(&mut self, record: &MetaRecord) -> Result<()> {
        writeln!(self.file, "{}", serde_json::to_string(record)?)?;
        self.file.flush()?;
        Ok(())
    }
}

pub fn read_log(path: &Path) -> Result<Vec<MetaRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{} line {}", path.display(), i + 1))?);
    }
    Ok(out)
}

/// Writes through a temporary file so an interrupted save never leaves a
/// truncated state behind.
pub fn save_state(path: &Path, trainer: &MetaTrainer) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(trainer)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_state(path: &Path) -> Result<MetaTrainer> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}
