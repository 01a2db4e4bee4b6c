use thiserror::Error;

pub type Result<T> = std::result::Result<T, MorreyError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorreyError {
    #[error("invalid exponents p = {p}, q = {q}: require 1 <= p <= q < inf")]
    InvalidExponents { p: f64, q: f64 },

    #[error("conflicting values for index {index}: {first} and {second}")]
    ConflictingDuplicate {
        index: i128,
        first: f64,
        second: f64,
    },

    #[error("non-finite value {value} at index {index}")]
    NonFiniteValue { index: i128, value: f64 },

    #[error("malformed sequence JSON: {0}")]
    MalformedSequence(String),

    #[error("integer overflow: {0}")]
    IndexOverflow(String),

    #[error("parameter overflow: {0}")]
    ParameterOverflow(String),

    #[error("support of {size} points exceeds the limit of {limit}")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("infeasible enumeration: box of {width} indices exceeds the limit of {limit}")]
    InfeasibleEnumeration { width: u128, limit: u128 },

    #[error("empty open interval ({lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },

    #[error("no admissible (v, w) found with w <= {limit}")]
    SearchExhausted { limit: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
