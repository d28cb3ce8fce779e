//! Experiment harness: configuration, inequality suites and report writing.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod suites;

pub use config::{Experiment, ExperimentConfig};
pub use error::HarnessError;
pub use report::{Record, Status, SuiteReport};
pub use runner::{run, RunOptions};
pub use suites::Suite;
