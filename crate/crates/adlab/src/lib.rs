//! Command-line front end, file formats, and report emission for the
//! `adlab-core` numerics.

pub mod cli;
pub mod error;
pub mod formats;
pub mod report;

pub use cli::run;
pub use error::CliError;
