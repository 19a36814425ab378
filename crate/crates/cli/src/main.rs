use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;
mod report;

use args::{Cli, Command};

/// Why a command did not produce a report.
#[derive(Debug)]
pub enum Failure {
    /// Bad command line shape; exit code 1.
    Usage(String),
    /// Parameters parsed but rejected, or a numeric failure; exit code 2.
    Numeric(String),
}

const SYNOPSIS: &str = "usage: teleportrix <teleport|swap|classify|sweep> [OPTIONS]\n\
                        run `teleportrix <command> --help` for details";

fn execute(cli: &Cli) -> Result<(String, Option<&std::path::Path>), Failure> {
    let (text, common) = match &cli.command {
        Command::Teleport(a) => (commands::teleport(a)?, &a.common),
        Command::Swap(a) => (commands::swap(a)?, &a.common),
        Command::Classify(a) => (commands::classify_cmd(a)?, &a.common),
        Command::Sweep(a) => (commands::sweep(a)?, &a.common),
    };
    Ok((text, common.out.as_deref()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            // an unparsable TELEPORTRIX_SEED or --seed is a value problem
            let code = if e.kind() == ErrorKind::ValueValidation {
                2
            } else {
                1
            };
            let _ = e.print();
            eprintln!("{SYNOPSIS}");
            return ExitCode::from(code);
        }
    };

    match execute(&cli) {
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, Some(path))) => match std::fs::write(path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n{SYNOPSIS}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
