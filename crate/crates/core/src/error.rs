use thiserror::Error;

/// Errors raised by the exact kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NonInvertible { value: String, modulus: String },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("cannot factor {0}: cofactor exceeds 2^64 after trial division")]
    FactorizationTooHard(String),

    #[error("denominator {den} is not coprime to pq = {pq}")]
    NotCoprime { den: String, pq: String },

    #[error("operation undefined at the identity element: {0}")]
    IdentityElement(String),

    #[error("p^m q^n = 1 is possible for the dependent pair ({p}, {q})")]
    DependentParams { p: u64, q: u64 },

    #[error("parameter mismatch: ({0}) vs ({1})")]
    ParamsMismatch(String, String),

    #[error("moment range too small: {0}")]
    RangeTooSmall(String),

    #[error("incompatible group homomorphism: {0}")]
    IncompatibleMap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0} is not an element of Z[1/pq]")]
    NotPqRational(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
