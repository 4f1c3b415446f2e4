use thiserror::Error;

/// Errors raised by field construction, polynomial work and the checkers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not completely factor {0} within the factoring budget")]
    FactorBudget(String),

    #[error("field of size {size} exceeds the enumeration budget of {limit} elements")]
    EnumerationBudget { size: String, limit: u64 },

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: String, value: String },

    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,

    #[error("polynomial {0} is not monic")]
    NotMonic(String),

    #[error("zero has no multiplicative order")]
    ZeroElement,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
