//! Configuration, seeding, statistics, rendering and experiment dispatch.

pub mod config;
pub mod error;
pub mod experiments;
pub mod render;
pub mod runner;
pub mod seed;
pub mod stats;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::HarnessError;
pub use experiments::{run, Report};
