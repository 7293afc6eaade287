use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid hyperparameters, unknown column names, or grids that cannot be evaluated.
    Config(String),
    /// Input that cannot be represented as a dataset (bad cell, ragged row).
    Format {
        /// 1-based data row (the header is row 0), when known.
        row: Option<usize>,
        /// 0-based column, when known.
        column: Option<usize>,
        /// What went wrong.
        message: String,
    },
    /// A dataset with no rows.
    EmptyDataset,
    /// Missing values where the operation cannot accept them.
    Preprocessing(String),
    /// A numeric precondition was violated (asymmetric matrix, non-unit vector).
    Contract(String),
    /// Arguments outside an operation's mathematical domain.
    Domain(String),
    /// Cohen's d with both standard deviations equal to zero.
    UndefinedEffect,
}

/// Shorthand for results carrying [`Error`].
pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn preprocessing(msg: impl Into<String>) -> Self {
        Error::Preprocessing(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Format {
                row,
                column,
                message,
            } => {
                write!(f, "format error")?;
                if let Some(row) = row {
                    write!(f, " at row {row}")?;
                }
                if let Some(column) = column {
                    write!(f, ", column {column}")?;
                }
                write!(f, ": {message}")
            }
            Error::EmptyDataset => write!(f, "dataset has no rows"),
            Error::Preprocessing(msg) => write!(f, "preprocessing error: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UndefinedEffect => {
                write!(f, "effect size undefined: both standard deviations are zero")
            }
        }
    }
}

impl core::error::Error for Error {}
