use thiserror::Error;

/// Errors produced by the library.
///
/// Domain errors carry enough context to be shown to a CLI user verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("content of zero polynomial")]
    ContentOfZero,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid coefficient array: {0}")]
    Coefficients(String),

    #[error("{op}: nonconstant polynomial required")]
    ConstantPolynomial { op: &'static str },

    #[error("{op}: zero polynomial not allowed")]
    ZeroPolynomial { op: &'static str },

    #[error("resultant: positive degree required")]
    PositiveDegreeRequired,

    #[error("repeated factor: discriminant is zero")]
    RepeatedFactor,

    #[error("not squarefree: distinct-factor count undefined (discriminant is zero)")]
    NotSquarefree,

    #[error("{op}: polynomial must be monic")]
    NonMonic { op: &'static str },

    #[error("sieve limit must be at least 2, got {0}")]
    SieveLimit(u64),

    #[error("modulus {0} is not a prime")]
    NotPrime(u64),

    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("loglog nonpositive: x must exceed e")]
    LogLogNonPositive,

    #[error("log x must be positive")]
    NonPositiveLog,

    #[error("x too small: need x > {threshold}")]
    XTooSmall { threshold: String },

    #[error("x below the validity threshold of the bound: need x >= {threshold}")]
    BelowThreshold { threshold: String },

    #[error("degree {degree} too small for {op} (need d >= {min})")]
    DegreeTooSmall { op: &'static str, degree: usize, min: usize },

    #[error("vacuous residue bracket: upper bound {upper} is below lower bound {lower}")]
    VacuousBracket { lower: String, upper: String },

    #[error("value exp({0}) is not representable as a plain real")]
    Overflow(String),

    #[error("exact-rational mode is limited to x <= {limit}")]
    ExactModeLimit { limit: u64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
