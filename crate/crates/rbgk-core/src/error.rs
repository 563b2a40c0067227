//! Error type shared by the whole crate.

/// Everything that can go wrong in the numerical core.
///
/// Variants carry a human-readable context string; callers that need to
/// branch on failure kind match on the variant.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result representable only below the smallest normal f64.
    #[error("underflow: {0}")]
    Underflow(String),

    /// A root could not be bracketed inside the configured range.
    #[error("bracket failure: {0}")]
    Bracket(String),

    /// An iteration failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Moment four-vector not timelike; no rest frame exists.
    #[error("non-timelike moments: {0}")]
    NonTimelike(String),

    /// Normalized light moment alpha outside (0, 1).
    #[error("alpha out of range: {0}")]
    AlphaOutOfRange(String),

    /// Field values violate positivity or finiteness requirements.
    #[error("non-physical field: {0}")]
    NonPhysical(String),

    /// Inconsistent run or grid configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The time-stepping scheme violated one of its certified bounds.
    #[error("scheme failure: {0}")]
    Scheme(String),

    /// Serialization format violation (bad magic, truncation, ...).
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
