use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("need at least {needed} terms, got {got}")]
    InsufficientTerms { needed: usize, got: usize },

    #[error("index {index} out of range for series of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("cannot differentiate a series of order 0")]
    OrderZero,

    #[error("inner series must have zero constant term")]
    NonzeroConstantTerm,

    #[error("log requires constant term 1")]
    ConstantTermNotOne,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("normal form term ({j},{k}) violates the expected shape: {msg}")]
    StructureViolation { j: usize, k: usize, msg: String },

    #[error("resource cap exceeded: {what} is {value}, cap is {cap} (override with --unsafe-cap)")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("precision too low: error bound {bound} is not below 1/2")]
    PrecisionTooLow { bound: String },

    #[error("malformed weight spec: {0}")]
    WeightSpec(String),

    #[error("malformed serialized value: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(Error::ResourceCap { what, value, cap })
        } else {
            Ok(())
        }
    }
}
