//! `qkr`: kicked-rotor Loschmidt echo simulations written as CSV.

mod commands;
mod config;
mod csv;
mod error;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qkr",
    version,
    about = "Atom-optics kicked rotor with Loschmidt echo pulse trains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Momentum distribution after the echo train
    Echo(RunArgs),
    /// Zero-order fraction P(0) after every kick
    #[command(name = "p0-sequence")]
    P0Sequence(RunArgs),
    /// Central-peak FWHM for each --epsilon
    #[command(name = "fwhm-sweep")]
    FwhmSweep(RunArgs),
    /// Run the propagator self-checks
    Verify,
}

const THREADS_VAR: &str = "QKR_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_VAR) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{THREADS_VAR} must be a positive integer, got '{value}'"
                ))
            })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn simulate(args: &RunArgs, f: fn(&RunConfig) -> Result<String, CliError>) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args)?;
    let pool = thread_pool()?;
    let text = pool.install(|| f(&cfg))?;
    emit(&cfg, &text)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Echo(args) => simulate(&args, commands::echo),
        Command::P0Sequence(args) => simulate(&args, commands::p0_sequence),
        Command::FwhmSweep(args) => simulate(&args, commands::fwhm_sweep),
        Command::Verify => {
            let (report, failures) = commands::verify();
            print!("{report}");
            if failures > 0 {
                Err(CliError::Verification(failures))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qkr: {e}");
            e.exit_code()
        }
    }
}
