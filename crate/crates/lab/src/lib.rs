//! Multi-threaded Monte Carlo driver, result serialization and the
//! `typicality` command-line tool, built on `typicality-core`.

pub mod cli;
pub mod commands;
mod error;
pub mod memo;
pub mod output;
pub mod runner;

pub use error::{LabError, Result};
pub use runner::Runner;
