//! Std companion for spaqt-core: experiment configuration, scenario runs,
//! the acceptance criteria, and JSON/CSV reports.
//!
//! A run goes config → [`scenarios::run`] → [`report::Report`] →
//! [`report::emit`]. The `spaqt` binary wraps exactly this pipeline.

pub mod config;
pub mod criteria;
pub mod report;
pub mod scenarios;

pub use config::{ConfigError, ConfigFile, ExperimentConfig, Format, Scenario, Tolerances};
pub use report::{emit, Assertion, EmitError, Report};
pub use scenarios::{run, RunError};
