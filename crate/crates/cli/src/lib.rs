//! Command-line front end: argument parsing, dispatch and exit codes.

pub mod args;
pub mod error;
pub mod run;

pub use args::Cli;
pub use error::{CliError, Result};
pub use run::run;
