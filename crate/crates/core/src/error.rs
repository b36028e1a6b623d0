use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent {exp} exceeds the bound {cap}")]
    ExponentOverflow { exp: u64, cap: u64 },

    /// The truncation degree reached its cap without a Nakayama certificate.
    #[error("colength exceeds truncation cap {cap} (not m-primary, or beyond desk scale)")]
    ExceedsCap { cap: usize },

    /// Random choices disagreed; retry with a fresh seed.
    #[error("genericity failure (seeds {seeds:?}): {detail}")]
    Genericity { seeds: Vec<u64>, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("presentation unavailable: {0}")]
    PresentationUnavailable(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::ExponentOverflow { .. } | Error::Precondition(_) | Error::Invalid(_) => 2,
            Error::ExceedsCap { .. }
            | Error::Resource(_)
            | Error::Inconclusive(_)
            | Error::PresentationUnavailable(_) => 3,
            Error::Genericity { .. } => 4,
        }
    }
}
