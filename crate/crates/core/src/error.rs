use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NotHermitian: max |m - m^dagger| = {deviation:.3e} exceeds tolerance")]
    NotHermitian { deviation: f64 },

    #[error("matrix dimension {found} is not supported (expected 2 or 4)")]
    UnsupportedDimension { found: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("PathNotClosed: {0}")]
    PathNotClosed(String),

    #[error("TrivialEta: eta = -1 gives a vanishing total phase")]
    TrivialEta,

    #[error("InfeasibleSegment: segment {index}: {reason}")]
    InfeasibleSegment { index: usize, reason: String },

    #[error("InfeasibleTarget: {0}")]
    InfeasibleTarget(String),

    #[error("InvalidState: {0}")]
    InvalidState(String),

    #[error("invalid path segment: {0}")]
    InvalidSegment(String),

    #[error("time {t} outside schedule range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
