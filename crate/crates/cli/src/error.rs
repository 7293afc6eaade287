use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line tool.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values or inconsistent inputs.
    #[error("{0}")]
    Usage(String),
    /// An input file could not be read.
    #[error("cannot read {path}: {source}")]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed CSV or JSON input.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    /// An output could not be written.
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Rejected by the induction or evaluation library.
    #[error(transparent)]
    Core(#[from] cart_elc_core::Error),
    /// The worker pool could not be built.
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl CliError {
    /// 2 for anything caused by the caller's input, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        use cart_elc_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Parse { .. } => 2,
            CliError::Core(E::Contract(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Output { .. } | CliError::Pool(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
