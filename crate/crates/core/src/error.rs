use thiserror::Error;

/// Errors surfaced by the library.
///
/// `TheoremViolation` is special: it flags an internal consistency check
/// failing where a proved statement guarantees success.  Callers (notably the
/// CLI) map it to a distinct exit code so that it is never confused with bad
/// input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("character factors through the norm: {0}")]
    FactorsThroughNorm(String),

    #[error("wrong kind of object: {0}")]
    KindMismatch(String),

    #[error("index set not admissible: {0}")]
    InvalidIndex(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("search failed: {0}")]
    NotFound(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed (theorem violation): {0}")]
    TheoremViolation(String),

    #[error("p-adic precision exhausted: {0}; retry with a larger precision N")]
    Precision(String),

    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
