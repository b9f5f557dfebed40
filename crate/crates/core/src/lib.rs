//! Learned and discovered evolution strategies.
//!
//! `no_std` + `alloc` core: the diagonal Gaussian search distribution, the
//! attention-based learned strategy and its closed-form discovered variant,
//! hand-crafted baselines, benchmark objectives, and the meta-training loop
//! that evolves the learned strategy's parameters. IO, file formats and the
//! command-line front end live in the `les` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod des;
pub mod error;
pub mod les;
pub mod math;
pub mod metabbo;
pub mod matrix;
pub mod rng;
pub mod runner;
pub mod search;
pub mod serde_f64;
pub mod shaping;
pub mod strategy;
pub mod tasks;

pub use error::{Error, Result};
pub use matrix::Matrix;
