//! Config-driven experiment runner for the `priorkryl` command.

pub mod config;
pub mod diagnose;
pub mod error;
pub mod output;
pub mod report;
pub mod run;

use std::path::Path;

pub use config::{parse_config, ExperimentConfig, ProblemKind, SolverChoice};
pub use error::CliError;
pub use report::RunReport;
pub use run::{run_experiment, RunOutcome};

/// Reads a config file for `problem`.
pub fn load_config(path: &Path, problem: ProblemKind) -> Result<config::ParsedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text, problem)
}

/// `priorkryl deconv`
pub fn run_deconv(config: &Path, out: Option<&Path>) -> Result<RunOutcome, CliError> {
    let mut cfg = load_config(config, ProblemKind::Deconv)?.config;
    if let Some(out) = out {
        cfg.output_dir = out.to_path_buf();
    }
    run_experiment(&cfg)
}

/// `priorkryl ct`
pub fn run_ct(config: &Path, full: bool) -> Result<RunOutcome, CliError> {
    let parsed = load_config(config, ProblemKind::Ct)?;
    let mut cfg = parsed.config;
    if full {
        cfg.apply_full_preset(parsed.explicit.iter().any(|k| k == "diagnostics"));
    }
    run_experiment(&cfg)
}
