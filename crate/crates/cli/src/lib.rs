//! Command-line front end: problem files in, deterministic text or JSON
//! reports out.
//!
//! Exit codes: `0` every check passed, `1` a check or validation failed,
//! `2` usage, parse or I/O error, `3` internal error.

pub mod commands;
pub mod criteria;
pub mod problem;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub use commands::Cli;
pub use report::{Format, Report};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid problem file: {0}")]
    Schema(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Schema(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = cli.format;
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| commands::execute(&cli)))
        .unwrap_or_else(|_| Err(CliError::Internal("computation panicked".into())));
    match result {
        Ok(report) => Outcome { code: if report.passed { 0 } else { 1 }, stdout: report.render(format), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
