use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("{modulus} divides the denominator of the coefficient of X^{degree}")]
    BadReduction { modulus: BigInt, degree: usize },

    #[error("polynomial of degree {degree} exceeds the coefficient cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
