use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracvar_cli::config::{apply_overrides, parse_raw, ExperimentConfig};
use fracvar_cli::{list_experiments, output_root, run_to, ConfigError};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "fracvar", version, about = "Run fractional-calculus verification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every experiment id with a one-line description.
    List,
    /// Run one experiment described by a JSON config and/or flags.
    Run {
        /// JSON configuration file.
        config: Option<PathBuf>,
        /// Experiment id; overrides the one in the config file.
        #[arg(long)]
        experiment: Option<String>,
        /// Field override, e.g. `--set n=2048` or `--set tolerances.lhs=1e-2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
}

fn load(
    config: Option<PathBuf>,
    experiment: Option<String>,
    sets: Vec<String>,
) -> Result<ExperimentConfig, ConfigError> {
    let mut doc = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError { errors: vec![format!("{}: {e}", path.display())] })?;
            // Parse once for field paths, then keep the document for overrides.
            parse_raw(&text)?;
            serde_json::from_str(&text).expect("document already parsed")
        }
        None => serde_json::json!({}),
    };
    if let Some(id) = experiment {
        doc["experiment"] = serde_json::Value::String(id);
    }
    if config.is_none() && doc.get("experiment").is_none() {
        return Err(ConfigError { errors: vec!["either a config file or --experiment is required".into()] });
    }
    apply_overrides(&mut doc, &sets)?;
    ExperimentConfig::resolve(parse_raw(&doc.to_string())?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, experiment, sets) = match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            return ExitCode::SUCCESS;
        }
        Command::Run { config, experiment, sets } => (config, experiment, sets),
    };
    let config = match load(config, experiment, sets) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let outcome = match run_to(&config, &output_root(&config)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {} failed: {e:#}", config.experiment);
            return ExitCode::from(EXIT_RUNTIME);
        }
    };
    let report = &outcome.report;
    println!(
        "{}: {} of {} assertions passed in {:.2}s, outputs in {}",
        config.experiment,
        report.assertions.iter().filter(|a| a.passed).count(),
        report.assertions.len(),
        outcome.wall_time.as_secs_f64(),
        outcome.dir.display()
    );
    let mut failed = false;
    for a in report.failures() {
        failed = true;
        let rel = match a.relation {
            fracvar_cli::record::Relation::AtMost => "<=",
            fracvar_cli::record::Relation::AtLeast => ">=",
        };
        eprintln!("FAIL {} ({}): measured {:e}, required {rel} {:e}", a.id, a.traces, a.measured, a.tolerance);
    }
    if failed {
        ExitCode::from(EXIT_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}
