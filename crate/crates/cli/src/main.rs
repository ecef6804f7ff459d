//! `sicrep`: batch driver for SIC construction and the
//! probability-simplex representation of quantum states.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error, 3 I/O or file-format error. Every flag can also
//! be set through an environment variable with the `SICREP_` prefix.

#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod formats;
mod report;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Check(msg) | CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sicrep",
    version,
    about = "SIC search, verification, and simplex-representation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a SIC fiducial and write it to a file.
    SicFind(commands::SicFindArgs),
    /// Verify a fiducial file against the overlap condition.
    Verify(commands::VerifyArgs),
    /// Analyze a probability vector: quantum validity and purity residuals.
    CheckState(commands::CheckStateArgs),
    /// Compare the Urgleichung against the Born rule (sampled or from files).
    Urgleichung(commands::UrgleichungArgs),
    /// Build a certainty experiment and report Gram matrix, angle, residuals.
    Certainty(commands::CertaintyArgs),
    /// Print the exact q-family table of theory constants.
    TheoryTable(commands::TheoryTableArgs),
}

fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::SicFind(args) => commands::sic_find(args),
        Command::Verify(args) => commands::verify(args),
        Command::CheckState(args) => commands::check_state(args),
        Command::Urgleichung(args) => commands::urgleichung_cmd(args),
        Command::Certainty(args) => commands::certainty(args),
        Command::TheoryTable(args) => commands::theory_table(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
