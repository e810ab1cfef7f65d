use thiserror::Error;

use crate::ideal_chain::ChainLevel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported bound 2^16")]
    PrimeTooLarge(u64),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not a p^{n}-th power: exponent {exponent} is not divisible by {q}")]
    NotAPnPower { n: u32, q: u64, exponent: u64 },

    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error("constant input: {0}")]
    ConstantInput(&'static str),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("chain did not stabilize by level {max_level} ({} levels computed)", levels.len())]
    LevelExceeded {
        max_level: u32,
        levels: Vec<ChainLevel>,
    },

    #[error("generator of degree {degree} violates the bound < {bound}")]
    DegreeBoundViolation { degree: i64, bound: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant breach: {0}")]
    InternalError(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::ContextMismatch(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalError(msg.into())
    }
}
