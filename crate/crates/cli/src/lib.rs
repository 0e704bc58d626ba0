//! Command-line front end for `nanobound-core`.
//!
//! Each subcommand produces a set of [`output::Table`]s that are written as
//! CSV files with `#` metadata headers, optional JSON mirrors, and a
//! `manifest.json` holding the resolved configuration and its hash.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use nanobound_core::config::Params;

pub use args::Cli;

/// Environment variable consulted when `--config` is absent.
pub const CONFIG_ENV: &str = "NANOBOUND_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<nanobound_core::Error> for CliError {
    fn from(e: nanobound_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

/// Reads the configuration from `path`, else from `$NANOBOUND_CONFIG`, else
/// returns the built-in defaults.
pub fn load_config(path: Option<&Path>) -> Result<Params, CliError> {
    let path: Option<PathBuf> = path.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        None => Ok(Params::default()),
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            Ok(Params::from_kv_str(&text)?)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and writes its artifacts.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let started = output::unix_now();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        // a second initialisation in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let params = load_config(cli.global.config.as_deref())?;
    let (params, tables) = commands::dispatch(&cli.command, params)?;
    let command = format!("{:?}", cli.command);
    output::write_artifacts(&cli.global.out, &tables, cli.global.json, &params.snapshot(), &command, started)
}

#[cfg(test)]
mod end_to_end;
