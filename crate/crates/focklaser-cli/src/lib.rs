//! Command-line front end: parse flags and an optional JSON config, dispatch
//! to the library, and write one result envelope as CSV or JSON.
//!
//! Exit status: 0 on success, 2 when a parameter fails validation, 1 when a
//! computation or I/O fails.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

use config::{Cli, Format, Resolved};
use table::Envelope;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] focklaser::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Library(focklaser::Error::InvalidParameter { .. }) => 2,
            _ => 1,
        }
    }
}

impl From<table::TableError> for CliError {
    fn from(e: table::TableError) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Resolves flags and the config file for a parsed command line.
pub fn resolve(cli: &Cli) -> Result<Resolved, CliError> {
    Resolved::new(cli.command, &cli.flags.load()?)
}

pub fn render(env: &Envelope, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Csv => env.to_csv()?,
        Format::Json => env.to_json()?,
    })
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let start = Instant::now();
    let mut env = commands::run(&cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    log::info!("{} finished in {elapsed:.3} s", cfg.command.name());
    if cfg.format == Format::Json {
        env.duration_s = Some(elapsed);
    }
    let text = render(&env, cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Full program: parse `argv`, run, report, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
