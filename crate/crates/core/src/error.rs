//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("cyclotomic index must be >= 1, got {0}")]
    InvalidIndex(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("field {field} does not contain {k} distinct {k}-th roots of unity")]
    RootsUnavailable { field: String, k: u64 },
    #[error("not a complex: d*d != 0 or shape mismatch at degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("not a chain map: fails to commute with differentials at degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("homology not supported on the given points: degree {degree}, divisor {divisor}")]
    SupportViolation { degree: i64, divisor: String },
    #[error("tensor power of {words} basis words exceeds the bound {bound}")]
    PowerTooLarge { words: u128, bound: u128 },
    #[error("{zeta} is not a {p}-th root of unity")]
    NotAnEigenvalue { zeta: String, p: u64 },
    #[error("{k}! is not invertible in {field}")]
    FactorialNotInvertible { k: u64, field: String },
    #[error("root-of-unity weighted sum is not integral at point {point}: {value}")]
    IntegralityFailure { point: String, value: String },
    #[error("chain-level witness fails at degree {degree}, basis word {word}")]
    WitnessFailure { degree: i64, word: String },
    #[error("requested size {requested} exceeds the configured bound {bound}")]
    BoundExceeded { requested: u64, bound: u64 },
    #[error("class functions live on different groups: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
