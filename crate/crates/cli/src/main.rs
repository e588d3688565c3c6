//! `fimpute`: impute gaps in a series, benchmark methods, print diagnostics
//! and draw masks.
//!
//! Exit codes: 0 on success, 1 when a solver stopped before converging (all
//! outputs are still written), 2 on bad input or configuration. Errors are
//! reported on standard error as `{"error": kind, "message": text}`.

mod bench;
mod common;
mod diagnose;
mod error;
mod impute;
mod mask_cmd;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fimpute",
    version,
    about = "Fill gaps in time series by spectral L1 minimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Impute the gaps of one series.
    Impute(impute::ImputeArgs),
    /// Run a seeded comparison of several methods on one dataset.
    Bench(bench::BenchArgs),
    /// Print the concentration, bound and threshold report for a series.
    Diagnose(diagnose::DiagnoseArgs),
    /// Draw a random mask.
    Mask(mask_cmd::MaskCmdArgs),
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Impute(a) => impute::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Diagnose(a) => diagnose::run(a).map(|()| true),
        Command::Mask(a) => mask_cmd::run(a).map(|()| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!(
                "{}",
                CliError::usage(e.render().to_string().trim()).to_json()
            );
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!(
                "{}",
                serde_json::json!({ "warning": "not_converged", "message": "solver reached max_iters" })
            );
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
