//! `homport` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error, 4 non-unitary input, 5 dimension cap exceeded. Diagnostics go to
//! stderr; results go to stdout (or `--out` for `dft`).

mod args;
mod commands;
mod error;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

const THREADS_ENV: &str = "HOMPORT_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Dft { n, out: path } => commands::dft(n, path.as_deref(), &mut out),
        Command::Coincidence {
            source,
            stats,
            json,
            force,
        } => commands::coincidence(&source, stats, json, force, &mut out),
        Command::Distribution {
            source,
            stats,
            format,
            force,
        } => commands::distribution(&source, stats, format, force, &mut out),
        Command::Sweep {
            min,
            max,
            stats,
            format,
            force,
        } => commands::sweep(min, max, stats, format, force, &mut out),
        Command::Verify { n_max } => commands::verify(n_max, &mut out),
    }?;
    out.flush().map_err(CliError::from)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors.
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homport: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
