use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree vectors differ: {left:?} vs {right:?}")]
    DegreeMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("invalid degree vector: {0}")]
    InvalidDegrees(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("zero vector cannot represent a projective point")]
    ZeroPoint,

    #[error("zero system cannot be normalized")]
    ZeroSystem,

    #[error("linear system is numerically singular (reciprocal condition {rcond:e})")]
    SingularLinearSolve { rcond: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("certified step {t:e} fell below the minimum step length")]
    MinStepReached { t: f64 },

    #[error("matrix kernel is not one-dimensional")]
    RankDeficient,

    #[error("start and target systems coincide up to sign")]
    DegenerateHomotopy,

    #[error("root lies at infinity (|z0| = {z0:e})")]
    AffineRootAtInfinity { z0: f64 },

    #[error("Newton iteration did not converge within {iters} iterations")]
    NonConvergence { iters: usize },

    #[error("point matches more than one reference root")]
    AmbiguousMatch,

    #[error("histogram has no hits")]
    EmptyHistogram,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
