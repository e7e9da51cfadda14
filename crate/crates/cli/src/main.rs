//! `dni`: command-line front end. Exit codes: 0 success, 2 invalid input,
//! 1 internal failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use commands::{Command, Failure};

/// Output directory used when `--out` is absent.
pub const OUT_ENV: &str = "DNI_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "dni", version, about = "Dirichlet non-improvability toolkit")]
struct Cli {
    /// Directory for artifacts; falls back to $DNI_OUT. Nothing is written if neither is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from));
    match commands::run(&cli.command, cli.format, out.as_deref()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
