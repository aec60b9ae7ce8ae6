use thiserror::Error;

/// Errors raised across the library.
///
/// Variants split into two families that the CLI maps to different exit
/// codes: validation problems with the caller's input ([`Error::is_guard`]
/// is false) and guard or search-bound exhaustion (true).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("floor undecidable at maximum precision")]
    PrecisionExhausted,
    #[error("membership undecided: known prefix of the beta expansion exhausted")]
    Undecided,
    #[error("point is not in the system: {0}")]
    NotInSystem(String),
    #[error("word is not readable on the graph")]
    NotReadable,
    #[error("period word is not primitive")]
    NotPrimitive,
    #[error("point is not presented by a loop through the root: {0}")]
    NotRootLoop(String),
    #[error("measures are in different modes")]
    ModeMismatch,
    #[error("convex weights do not sum to one")]
    WeightsNotNormalized,
    #[error("insufficient prefix: need {needed} symbols, have {have}")]
    InsufficientPrefix { needed: usize, have: usize },
    #[error("support too large for brute force: {0} atoms")]
    SupportTooLarge(usize),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("no admissible closing (p, q) within the supplied range")]
    NoClosureInRange,
    #[error("no repetition counts within the search bound")]
    NoCountsInRange,
    #[error("horizon {horizon} below the stage-2 block length {needed}")]
    HorizonTooSmall { horizon: usize, needed: usize },
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for guard, bound and limit failures (CLI exit code 3).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted
                | Error::Undecided
                | Error::SupportTooLarge(_)
                | Error::LimitExceeded(_)
                | Error::NoClosureInRange
                | Error::NoCountsInRange
                | Error::HorizonTooSmall { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
