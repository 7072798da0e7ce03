use thiserror::Error;

use crate::laws::LawViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` takes {expected} argument(s), got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("element {element} is out of range for a carrier of size {carrier}")]
    ElementOutOfRange { element: usize, carrier: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid table for `{symbol}`: {reason}")]
    InvalidTable { symbol: String, reason: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameters for `{kind}`: {reason}")]
    InvalidParams { kind: String, reason: String },

    #[error("skeleton/parameter shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not a congruence")]
    NotACongruence,

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("{} law(s) violated", .0.len())]
    Precondition(Vec<LawViolation>),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("algebra file: {0}")]
    Format(String),

    #[error("{0}")]
    Usage(String),
}
