//! Library half of the `citeconc` binary: configuration, the three
//! subcommands, and report/manifest emission. Kept separate from `main.rs`
//! so integration tests can drive commands without spawning processes.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

pub use commands::{cmd_analyze, cmd_generate, cmd_validate, AnalyzeSummary, GenerateSource};
pub use config::{Job, Plan, RunConfig};

/// Command failure, split by who has to fix it.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration.
    Config(String),
    /// Unreadable or malformed input data, or an unwritable output.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
