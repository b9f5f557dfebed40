//! File formats, parallel execution and command implementations for the
//! `les` command-line tool. The algorithms live in `les_core`.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod exec;
pub mod manifest;
pub mod output;
pub mod runlog;
pub mod target;

pub use checkpoint::Checkpoint;
pub use config::{ConfigError, FileConfig};
pub use exec::RayonExecutor;
pub use manifest::RunManifest;
