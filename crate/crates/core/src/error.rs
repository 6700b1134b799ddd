use thiserror::Error;

/// Errors raised by the library. Verdict-level outcomes (a failed gate, a
/// point that does not pass) are not errors and live in [`crate::psp::Verdict`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("could not factor {0} with the configured trial-division bound")]
    FactorizationFailed(String),
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("curve has bad reduction at {p}")]
    BadReduction { p: u64 },
    #[error("prime {0} is not supported for curve arithmetic")]
    UnsupportedPrime(u64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("enumeration of {size} elements exceeds the cap {cap}")]
    CapExceeded { size: String, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the G test needs a CM discriminant for the curve")]
    MissingCmData,
    #[error("E(F_{p}) has no strongly non-zero point")]
    NoStronglyNonZero { p: u64 },
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
