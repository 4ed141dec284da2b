//! Experiment harness for catalytic quantum randomness.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on invalid
//! input.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, ExperimentConfig};
use output::{emit, Metadata};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Library(catrand::Error),
}

impl From<catrand::Error> for CliError {
    fn from(e: catrand::Error) -> Self {
        match e {
            catrand::Error::Precondition(_) | catrand::Error::Dimension(_) | catrand::Error::Resource { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Library(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = ExperimentConfig::resolve(cli)?;
    if let Some(tol) = config.tolerances {
        catrand::tolerance::install(tol).map_err(|_| CliError::Usage("tolerances already installed".into()))?;
    }
    let meta = Metadata::new(config.command.name(), config.seed, *catrand::tolerance::tolerances(), config.deterministic);
    let outcome = commands::run(&config.command, config.seed)?;
    emit(&outcome.docs, &meta, config.out.as_ref())?;
    match outcome.failure {
        Some(msg) => Err(CliError::CheckFailed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catrand: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
