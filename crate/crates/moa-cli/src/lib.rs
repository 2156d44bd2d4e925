//! Orchestration layer around the `moa` library: study configs, run
//! archives, CSV emission, and the four subcommands (optimize, aggregate,
//! analyze, compare). Everything here is callable as a library so the
//! binary stays a thin argument-parsing shell.

pub mod archive;
pub mod commands;
pub mod config;
pub mod csv_io;

/// Command-level failure, carrying the process exit code contract:
/// 2 config error, 3 data error, 4 incompatible-analysis error.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
    Incompatible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Incompatible(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Incompatible(m) => write!(f, "incompatible analysis: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config_err(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}

pub(crate) fn data_err(msg: impl std::fmt::Display) -> CliError {
    CliError::Data(msg.to_string())
}
