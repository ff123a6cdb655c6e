use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use nilentropy_cli::commands::read_document;
use nilentropy_cli::{
    cmd_bound, cmd_simulate, cmd_verify, BoundOptions, SimulateOptions, VerifyOptions,
};
use nilentropy_core::entropy_sim::SimParams;
use nilentropy_core::intpoly::DEFAULT_ROOT_TOL;

/// Entropy lower bounds for nilmanifold maps and torus simulations.
#[derive(Parser, Debug)]
#[command(name = "nilentropy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the report to this file as well as standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    json: bool,
    /// Root-certification tolerance, between 1e-14 and 1e-6.
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral entropy bound of a matrix or algebra endomorphism.
    Bound {
        /// Input document (kind `matrix` or `algebra_endo`).
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Separated-set entropy estimate of an affine torus map.
    Simulate {
        /// Input document (kind `torus_map`).
        #[arg(long)]
        input: PathBuf,
        /// Largest orbit length (at most 20).
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        /// Decreasing list of separation scales.
        #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05])]
        epsilon: Vec<f64>,
        /// Grid spacing as a fraction of epsilon (at most 1/4).
        #[arg(long, default_value_t = 0.125)]
        delta_fraction: f64,
        /// Also simulate the lift to the cover given in the document.
        #[arg(long)]
        cover: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in oracle suites.
    Verify {
        /// Seed for the random instances.
        #[arg(long, default_value_t = nilentropy_cli::verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-14..=1e-6).contains(&tol) {
        bail!("--tol {tol} is outside [1e-14, 1e-6]");
    }
    Ok(())
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(path) = output {
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Bound { input, common } => {
            check_tol(common.tol)?;
            let doc = read_document(&input)?;
            let report = cmd_bound(&doc, &BoundOptions { tol: common.tol })?;
            let text = if common.json {
                report.to_json()
            } else {
                report.to_text()
            };
            emit(&text, common.output.as_deref())?;
            Ok(true)
        }
        Command::Simulate {
            input,
            n_max,
            epsilon,
            delta_fraction,
            cover,
            common,
        } => {
            check_tol(common.tol)?;
            let doc = read_document(&input)?;
            let opts = SimulateOptions {
                params: SimParams {
                    n_max,
                    epsilons: epsilon,
                    delta_fraction,
                    ..SimParams::default()
                },
                cover,
                tol: common.tol,
            };
            let report = cmd_simulate(&doc, &opts)?;
            let text = if common.json {
                report.to_json()
            } else {
                report.to_text()
            };
            emit(&text, common.output.as_deref())?;
            Ok(true)
        }
        Command::Verify { seed, common } => {
            check_tol(common.tol)?;
            let summary = cmd_verify(&VerifyOptions {
                seed,
                tol: common.tol,
            });
            let text = if common.json {
                summary.to_json()
            } else {
                summary.to_text()
            };
            emit(&text, common.output.as_deref())?;
            Ok(summary.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
