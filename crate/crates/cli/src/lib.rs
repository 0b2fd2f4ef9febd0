//! Experiment runner behind the `fracvar` binary.
//!
//! A run executes the experiment described by a JSON configuration and
//! writes its files into `<root>/<experiment-id>/`; [`output`] defines the
//! formats. Outputs depend only on the configuration.

pub mod catalogue;
pub mod config;
pub mod experiments;
pub mod output;
pub mod record;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::Result;

pub use catalogue::{list_experiments, ExperimentId};
pub use config::{parse_config, ConfigError, ExperimentConfig};
pub use record::Report;

/// Environment variable naming the default output root.
pub const OUTPUT_DIR_ENV: &str = "FRACVAR_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "fracvar-output";

pub struct Outcome {
    pub dir: PathBuf,
    pub report: Report,
    pub files: Vec<PathBuf>,
    pub wall_time: Duration,
}

/// Output root: the configured directory, else `$FRACVAR_OUTPUT_DIR`, else
/// `fracvar-output` in the working directory.
pub fn output_root(config: &ExperimentConfig) -> PathBuf {
    config
        .output_dir
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

/// Runs `config` and writes its outputs under `root`.
pub fn run_to(config: &ExperimentConfig, root: &Path) -> Result<Outcome> {
    let start = Instant::now();
    let report = experiments::run(config)?;
    let dir = root.join(config.experiment.as_str());
    let files = output::write_outputs(&dir, config, &report)?;
    Ok(Outcome { dir, report, files, wall_time: start.elapsed() })
}
