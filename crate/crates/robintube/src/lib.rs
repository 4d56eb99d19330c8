//! Experiment driver for thin Robin tubes: configuration, pipeline stages,
//! CSV/JSON/SVG artifacts and the command-line front end.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod output;
pub mod plot;
pub mod run;

pub use config::ExperimentConfig;
pub use error::{ConfigError, RunError};
pub use run::{execute, output_dir, Command, RunSummary};
