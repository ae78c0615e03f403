use alloc::string::String;

/// Errors reported by the numerics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("path blocking is active")]
    BlockingActive,
    #[error("every path is blocked")]
    AllPathsBlocked,
    #[error("opening set is incomplete: missing {0}")]
    MissingOpening(String),
    #[error("vanishing denominator ({0:e})")]
    VanishingDenominator(f64),
    #[error("zero variance in sample")]
    ZeroVariance,
}

pub type Result<T> = core::result::Result<T, Error>;
