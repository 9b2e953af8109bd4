use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid digit range: from {from} > to {to}")]
    InvalidRange { from: u64, to: u64 },

    #[error("family index {index} out of range (family has {len} functions)")]
    FamilyIndex { index: usize, len: usize },

    #[error("value {value} lies outside [0,1)")]
    Domain { value: String },

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error("U contains {element}, which lies in the reserved triple {{{s}, {s}+1, {s}+2}}")]
    HypothesisViolation { s: u64, element: u64 },

    #[error("points must be distinct")]
    DegenerateInput,

    #[error("exhaustive enumeration needs {needed} free bits, limit is {limit}")]
    ResourceLimit { needed: usize, limit: usize },

    #[error("exhaustive enumeration requires a family of constant functions")]
    ExhaustiveUnsupported,

    #[error("slope fit needs at least 2 levels, got {levels}")]
    InsufficientData { levels: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            position: position.into(),
            message: message.into(),
        }
    }
}
