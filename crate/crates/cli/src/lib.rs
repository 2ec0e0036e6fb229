//! Library side of the `nmc` command-line tool. Each subcommand is a plain
//! function over paths and an output sink, so it can be driven from tests.

pub mod bench;
pub mod commands;
pub mod error;

pub use bench::{BenchSpec, ImageTable};
pub use error::{exit, CliError};
