use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no convergence after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("rank k = {k} out of range 1..={n}")]
    InvalidRank { k: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("format error at byte {offset}: {reason}")]
    Format { offset: usize, reason: String },

    #[error("bad magic bytes {found:02x?}")]
    BadMagic { found: Vec<u8> },

    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),

    #[error("CRC mismatch: stored {stored:08x}, computed {computed:08x}")]
    CrcMismatch { stored: u32, computed: u32 },

    #[error("truncated input: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
}

impl Error {
    pub(crate) fn format(offset: usize, reason: impl Into<String>) -> Self {
        Error::Format { offset, reason: reason.into() }
    }
}
