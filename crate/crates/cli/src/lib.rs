//! Library surface of the command-line tool, exposed so integration tests
//! can drive commands and the bound suite directly.

pub mod args;
pub mod artifacts;
pub mod bench;
pub mod commands;
pub mod formats;

pub use commands::{execute, CliError, Outcome};
