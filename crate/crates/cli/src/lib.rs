//! Batch harness around the `sharpconst` drivers: configuration parsing,
//! parallel execution and CSV/JSON/SVG reports.

pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod run;

pub use config::{Experiment, ExperimentConfig, Format};
pub use error::CliError;
pub use report::Report;
pub use run::{execute, run_experiment};
