//! Configuration, orchestration and reporting for the skew-product lab.

pub mod config;
pub mod runner;

pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use runner::{run, Check, RunError, RunReport};
