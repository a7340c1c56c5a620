use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use priorkryl_cli::{diagnose::diagnose, run_ct, run_deconv, CliError, RunOutcome};

/// Plain and priorconditioned CGLS experiments.
#[derive(Parser)]
#[command(name = "priorkryl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-dimensional Airy-kernel deconvolution.
    Deconv {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sparse-view tomography.
    Ct {
        #[arg(long)]
        config: PathBuf,
        /// 160×160 pixels, 20 angles, 60 offsets.
        #[arg(long)]
        full: bool,
    },
    /// Recomputes Ritz values, null-space fractions, projections and GSVD checks of a run.
    Diagnose {
        #[arg(long)]
        run: PathBuf,
    },
}

fn summarize(outcome: &RunOutcome) {
    for r in &outcome.runs {
        let ssim = r.report.ssim_mean.map(|s| format!(", ssim {s:.4}")).unwrap_or_default();
        println!("{}: stop index {} ({}){ssim}", r.name, r.report.stop_index, r.report.stop_reason);
    }
    println!("outputs in {}", outcome.out_dir.display());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let result: Result<(), CliError> = match cli.command {
        Command::Deconv { config, out } => run_deconv(&config, out.as_deref()).map(|o| summarize(&o)),
        Command::Ct { config, full } => run_ct(&config, full).map(|o| summarize(&o)),
        Command::Diagnose { run } => diagnose(&run).map(|()| println!("diagnostics written to {}", run.display())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("priorkryl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
