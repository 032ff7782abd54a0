//! Experiment runner for the `phaselock` library: config files, named
//! presets, parallel sweeps with deterministic output, file analysis and
//! trajectory dumps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod config;
pub mod error;
pub mod presets;
pub mod sweep;

pub use config::{ExperimentConfig, Scale};
pub use error::CliError;
