//! Seeded experiment runner: companded spline sampling tables, the
//! piecewise-noise demonstration, innovation identification tables and a
//! blind recovery demonstration, written as CSV and SVG.

pub mod artifact;
pub mod config;
pub mod instances;
pub mod runs;

pub use artifact::{Artifact, Table};
pub use config::{Experiment, ExperimentConfig};
pub use runs::{run, run_blind_demo, run_noise_demo, run_table1, run_table2, run_table3, run_table4};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{source} (config: {config})")]
    Pipeline { source: nlsampling::Error, config: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
