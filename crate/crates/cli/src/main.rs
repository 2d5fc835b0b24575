//! `shapeinv` command-line driver.
//!
//! Every subcommand reads an optional flat `key = value` config file
//! (`--config`), overlays the command-line flags on it and rejects unknown
//! keys before doing any work. Exit status: 0 when every check passes, 1 on
//! a failed check or solver failure, 2 on a usage or configuration error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// How a run ended when it did not pass.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config or parameters.
    Config(String),
    /// A check or solver failed.
    Science(String),
}

impl From<shapeinv::Error> for Failure {
    fn from(e: shapeinv::Error) -> Self {
        match e {
            shapeinv::Error::NoConvergence { .. } => Failure::Science(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Science(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Susy(a) => commands::susy(a),
        Command::Groundstate(a) => commands::groundstate(a),
        Command::Chain(a) => commands::chain(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(Failure::Science(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
    }
}
