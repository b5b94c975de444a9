use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state vector is empty")]
    EmptyState,

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("need at least {min} vectors, got {found}")]
    TooFewVectors { min: usize, found: usize },

    #[error("degenerate configuration: {what} (modulus {modulus:e})")]
    Degenerate { what: String, modulus: f64 },

    #[error("vectors {0} and {1} are orthogonal")]
    Orthogonal(usize, usize),

    #[error("vectors {0} and {1} define the same ray")]
    Coincident(usize, usize),

    #[error("{name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("inconsistent input: {what} (residual {residual:e})")]
    Inconsistent { what: String, residual: f64 },

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("root finder did not converge (residual {residual:e})")]
    RootFinding { residual: f64 },

    #[error("permanent of size {size} exceeds the supported maximum {max}")]
    SizeExceeded { size: usize, max: usize },

    #[error("arg of a vanishing quantity (modulus {0:e})")]
    PhaseSingularity(f64),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("grid too coarse: quadrature error estimate {estimate:e} above {tolerance:e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("junction {junction}: endpoint rays differ (|overlap| = {overlap})")]
    JunctionMismatch { junction: usize, overlap: f64 },

    #[error("segment {0} is not a null phase curve")]
    NotNullPhaseCurve(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
