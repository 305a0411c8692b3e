//! Experiment runner: JSON configs in, deterministic JSON reports and CSV
//! curves out.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use config::ExperimentConfig;
pub use error::HarnessError;
pub use report::{Check, CheckKind, Report};
