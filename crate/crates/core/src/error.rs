use thiserror::Error;

/// Errors raised by the field, curve, idele and symbol layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("desk cap exceeded: need {needed} elements, cap is {cap}")]
    CapExceeded { needed: u64, cap: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero function has no divisor or expansion")]
    ZeroFunction,
    #[error("place mismatch: {0} vs {1}")]
    PlaceMismatch(String, String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("evaluation undefined: valuation {0} at {1}")]
    NotAUnit(i64, String),
    #[error("divisor is not principal (class {0})")]
    NonPrincipal(String),
    #[error("support escapes window {window}: place {place} has degree {degree}")]
    WindowEscape { place: String, degree: u32, window: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
