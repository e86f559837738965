//! File formats, test-space generators and command implementations behind
//! the `fillbound` binary.

pub mod commands;
pub mod formats;
pub mod generators;

use fillbound::ErrorKind;

/// Exit status contract of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INFEASIBLE: i32 = 2;
    pub const CAPACITY: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fillbound::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Capacity => exit::CAPACITY,
                ErrorKind::Structural | ErrorKind::Domain => exit::INFEASIBLE,
            },
            CliError::Io { .. } => exit::IO,
            CliError::Json { .. } | CliError::Usage(_) => exit::INFEASIBLE,
        }
    }

    /// Kind label used in JSON error reports.
    pub fn kind_label(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Structural => "structural",
                ErrorKind::Domain => "domain",
                ErrorKind::Capacity => "capacity",
            },
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "structural",
            CliError::Usage(_) => "usage",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
