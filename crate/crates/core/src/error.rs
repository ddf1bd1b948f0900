use thiserror::Error;

/// Errors produced by the series, polynomial, certification and tracking code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid index {0}: indices start at 1")]
    InvalidIndex(usize),

    #[error("sequence has {len} entries, index {index} requested")]
    SequenceExhausted { index: usize, len: usize },

    #[error("ratio test failed at index {index}: consecutive tail terms do not halve")]
    RatioTestFailed { index: usize },

    #[error("value underflows the scalar type")]
    Underflow,

    #[error("value overflows the scalar type")]
    Overflow,

    #[error("exact value too large to materialize ({bits} bits)")]
    ExactTooLarge { bits: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("point is not a zero: residual {residual} exceeds tolerance")]
    NotAZero { residual: String },

    #[error("rank decision ambiguous: singular value ratio {ratio} inside the tolerance band")]
    PrecisionExhausted { ratio: String },

    #[error("coordinates are not non-zero and pairwise distinct: {0}")]
    DistinctnessViolated(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("jacobian is numerically singular")]
    SingularJacobian,

    #[error("newton iteration did not converge after {iters} iterations (residual {residual})")]
    NoConvergence { iters: usize, residual: String },

    #[error("no admissible start root found (tried {attempts} starting points)")]
    StartNotFound { attempts: usize },

    #[error("tracked path left the ball of radius {r_max} at degree {d}")]
    PathEscapedBall { d: usize, r_max: f64 },

    #[error("substep limit {limit} reached at degree {d}")]
    SubstepLimit { d: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across message wording changes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSequence(_) => "InvalidSequence",
            Error::InvalidIndex(_) => "InvalidIndex",
            Error::SequenceExhausted { .. } => "SequenceExhausted",
            Error::RatioTestFailed { .. } => "RatioTestFailed",
            Error::Underflow => "Underflow",
            Error::Overflow => "Overflow",
            Error::ExactTooLarge { .. } => "ExactTooLarge",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotAZero { .. } => "NotAZero",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::DistinctnessViolated(_) => "DistinctnessViolated",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::SingularJacobian => "SingularJacobian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::StartNotFound { .. } => "StartNotFound",
            Error::PathEscapedBall { .. } => "PathEscapedBall",
            Error::SubstepLimit { .. } => "SubstepLimit",
            Error::Parse(_) => "Parse",
        }
    }
}
