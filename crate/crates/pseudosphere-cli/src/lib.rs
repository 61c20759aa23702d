//! Command-line driver: configuration, field serialization and mesh export
//! around the `pseudosphere` library.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! configuration or domain-guard violation, 3 numerical or I/O failure.

pub mod args;
pub mod commands;
pub mod config;
pub mod io;
pub mod mesh;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use args::{Cli, Command, RunArgs};
pub use commands::{execute, Outcome, Task};
pub use config::{ExportToggles, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Verify(#[from] pseudosphere::verify::VerifyError),
    #[error(transparent)]
    Library(#[from] pseudosphere::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed {path}: {reason}")]
    Format { path: PathBuf, reason: String },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Domain(_) => EXIT_CONFIG,
            CliError::Verify(e) if e.is_domain() => EXIT_CONFIG,
            CliError::Library(e) if e.is_domain() => EXIT_CONFIG,
            _ => EXIT_NUMERIC,
        }
    }
}

/// Lifts any library error into [`CliError`].
pub(crate) fn lib<T, E: Into<pseudosphere::Error>>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Library(e.into()))
}

impl Command {
    pub fn task(&self) -> Task {
        match self {
            Command::Build(_) => Task::Build,
            Command::Lift(_) => Task::Lift,
            Command::Bianchi(_) => Task::Bianchi,
            Command::Verify(_) => Task::Verify,
            Command::Export(_) => Task::Export,
            Command::Sweep(_) => Task::Sweep,
        }
    }
}

/// Resolves the flags of `cmd`, runs it, and returns the process exit code
/// together with the text to print.
pub fn run(cmd: &Command) -> (i32, String) {
    let result = cmd.args().resolve().and_then(|cfg| execute(cmd.task(), &cfg));
    match result {
        Ok(o) if o.passed => (EXIT_OK, o.text),
        Ok(o) => (EXIT_CHECK_FAILED, o.text),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}
