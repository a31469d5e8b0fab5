mod args;
mod commands;
mod instance;
mod output;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use qanneal_core::Limits;

use args::{Cli, Command};

const MAX_QUBITS_VAR: &str = "QANNEAL_MAX_QUBITS";

fn limits() -> Result<Limits> {
    let limits = Limits::default();
    match std::env::var(MAX_QUBITS_VAR) {
        Ok(v) => {
            let max = v
                .trim()
                .parse()
                .with_context(|| format!("{MAX_QUBITS_VAR} must be a non-negative integer, got {v:?}"))?;
            Ok(limits.with_max_qubits(max))
        }
        Err(_) => Ok(limits),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(threads) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let limits = limits()?;
    let common = &cli.common;
    match &cli.command {
        Command::Generate(cmd) => commands::generate::run(common, cmd)?,
        Command::Verify(a) => return commands::verify::run(common, a, &limits),
        Command::Sample(a) => commands::sample::run(common, a, &limits)?,
        Command::Sweep(a) => commands::sweep::run(common, a, &limits)?,
        Command::Compare(a) => commands::compare::run(common, a, &limits)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
