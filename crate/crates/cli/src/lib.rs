//! Command-line front end: CSV input, tree and report files, run manifests.

pub mod commands;
pub mod error;
pub mod json;
pub mod manifest;
pub mod preset;
pub mod report;
pub mod table;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
