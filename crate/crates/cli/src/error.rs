use std::io;
use std::path::PathBuf;

use nmc::Error;

/// Process exit codes. Clap reports its own parse errors with `USAGE`.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const FORMAT: u8 = 3;
    pub const CRC: u8 = 4;
    pub const CONVERGENCE: u8 = 5;
    pub const IO: u8 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{context}: {source}")]
    Core { context: String, source: Error },
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core { source, .. } => match source {
                Error::Dimension(_) | Error::Argument(_) | Error::InvalidRank { .. } => exit::USAGE,
                Error::Format { .. } | Error::BadMagic { .. } | Error::UnsupportedVersion(_) | Error::Truncated { .. } => {
                    exit::FORMAT
                }
                Error::CrcMismatch { .. } => exit::CRC,
                Error::Convergence { .. } => exit::CONVERGENCE,
                Error::Contract(_) => exit::FAILURE,
            },
        }
    }
}
