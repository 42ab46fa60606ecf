use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("localization base mismatch: {left} vs {right}")]
    BaseMismatch { left: u64, right: u64 },

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },

    #[error("scalar ring mismatch: {0}")]
    RingMismatch(String),

    #[error("coefficient group mismatch: {0}")]
    SpecMismatch(String),

    #[error("elements come from different wreath contexts: {0}")]
    ContextMismatch(String),

    #[error("image of the base point is not invariant under the stabilizer")]
    NonInvariant,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("hypothesis {condition} failed: {detail}")]
    HypothesisFailed { condition: String, detail: String },

    #[error("group order {order} exceeds brute-force bound {bound}")]
    BoundExceeded { order: u128, bound: u128 },

    #[error("operation requires a finite coefficient group")]
    InfiniteCoefficients,

    #[error("operation requires an enumerable (finite) action backend")]
    NotFinite,
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn hypothesis(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::HypothesisFailed {
            condition: condition.into(),
            detail: detail.into(),
        }
    }
}
