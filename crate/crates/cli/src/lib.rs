//! Library side of the `abns` command-line tool.

pub mod args;
pub mod commands;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use thiserror::Error;

use args::{Cli, Command};
use commands::Report;
use output::{write_records, Record};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or input files; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// A check or computation failed; exit status 1.
    #[error("{0}")]
    Failure(String),
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

fn emit<R: Record>(cli: &Cli, report: Report<R>) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_records(&report.records, cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            write_records(&report.records, cli.format, stdout.lock())?;
        }
    }
    match report.failure {
        Some(msg) => Err(CliError::Failure(msg)),
        None => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(a) => emit(cli, commands::gen(a)?),
        Command::Verify(a) => emit(cli, commands::verify(a)?),
        Command::Facto(a) => emit(cli, commands::facto(a)?),
        Command::Zeros(a) => emit(cli, commands::zeros(a)?),
        Command::Limit(a) => emit(cli, commands::limit(a)?),
    }
}
