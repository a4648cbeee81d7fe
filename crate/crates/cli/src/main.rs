mod args;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{CheckKind, Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("no unique fraction for the weights of: {0}")]
    Snap(String),
    #[error(transparent)]
    Engine(#[from] defq::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Snap(_) => 1,
            CliError::Engine(e) => match e {
                defq::Error::MissingWeight(_) | defq::Error::Io(_) => 1,
                _ => 2,
            },
        }
    }
}

fn run(cli: Cli) -> Result<commands::Report, CliError> {
    match cli.command {
        Command::Graphs { n, nbar } => commands::graphs(n, nbar),
        Command::Weight { id, mc, cache } => commands::weight(&id, &mc, cache.cache.as_deref()),
        Command::Star { pi, f, g, order, weights } => commands::star(&pi.pi, &f, &g, order, &weights),
        Command::Moyal { pi, f, g, order } => commands::moyal_cmd(&pi.pi, &f, &g, order),
        Command::Check { kind, opts } => commands::check(kind, &opts),
        Command::Assoc { opts } => commands::check(CheckKind::Assoc, &opts),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.json).expect("JSON value serializes");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
