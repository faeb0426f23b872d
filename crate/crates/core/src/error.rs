use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("atom `{0}` has no value in the assignment")]
    UnboundAtom(String),

    #[error("`->` is not allowed here: {0}")]
    ArrowInFragment(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("duplicate state `{0}`")]
    DuplicateState(String),

    #[error("consequence in a model needs at least one premise")]
    EmptyPremises,

    #[error("search bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("conditional probability undefined: p({0}) = 0")]
    UndefinedConditional(String),

    #[error("formula `{0}` is outside the probability domain")]
    OutsideDomain(String),

    #[error("value {value} for `{formula}` is outside [0, 1]")]
    OutOfRange { formula: String, value: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no violation: {0}")]
    NoViolation(String),

    #[error("invalid bet: {0}")]
    InvalidBet(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
