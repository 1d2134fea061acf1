//! Experiment harness for the BEC multi-draw shuffling channel: JSON
//! configs, seeded parallel Monte Carlo drivers, and CSV/JSON output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{load_config, parse_config, DistributionSpec, ExperimentConfig, ExperimentKind};
pub use error::{LabError, Result};
