//! Experiment driver for `normdiv-core`: field spec files, experiment
//! configuration, parallel drivers, the identity suite and CSV/JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod par;
pub mod report;
pub mod spec_file;
pub mod suite;

pub use config::ExperimentConfig;
pub use error::{LabError, LabResult};
