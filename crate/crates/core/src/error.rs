use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live in different rings ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("polynomial has {got} coefficients, ring degree is {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("polynomial is not invertible in the requested ring")]
    NotInvertible,

    #[error("inversion is not supported modulo {0} (need 3, a prime, or a power of two)")]
    UnsupportedModulus(i64),

    #[error("operation requires a {0}")]
    WrongRing(&'static str),

    #[error("coefficient {0} does not fit the 16-bit wire encoding")]
    EncodeRange(i64),

    #[error("polynomial is outside the {0} sample space")]
    Membership(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no admissible multiplier k for q = {0}")]
    NoAdmissibleK(i64),

    #[error("Selling parameters are not obtuse for k = {k}, P = {shift}, q = {q}")]
    NotObtuse { k: i64, shift: i64, q: i64 },

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Gram-Schmidt vector {0} is numerically degenerate")]
    DegenerateBasis(usize),

    #[error("brute-force search too large: {0}")]
    SearchTooLarge(String),

    #[error("unknown parameter set `{name}` (known: {known})")]
    UnknownSet { name: String, known: String },

    #[error("registry: {0}")]
    Registry(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
