//! Batch runner for the `pesinlab-core` experiments: JSON configuration,
//! deterministic parallel sweeps, CSV tables and a JSON report.

pub mod config;
pub mod experiments;
pub mod output;
pub mod report;
pub mod run;

pub use config::{Config, ConfigError, Experiment};
pub use report::RunReport;
pub use run::{run, run_config_file, RunError, RunOptions};
