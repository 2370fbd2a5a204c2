//! Crate-wide error type.

/// Errors returned by this crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input too short or otherwise degenerate for the requested operation.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A design matrix was rank deficient beyond jitter tolerance.
    #[error("rank deficient system: {0}")]
    RankDeficient(String),

    /// A differencing ledger entry did not match the series it was asked to invert.
    #[error("inversion mismatch: {0}")]
    InversionMismatch(String),

    /// An argument was out of range or the wrong shape.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Iterative training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}: loss became non-finite")]
    Divergence { epoch: usize },

    /// A CSV input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Filesystem trouble while reading inputs or writing reports.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    /// A configuration file or override contained an unknown or malformed key.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
