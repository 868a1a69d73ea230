use thiserror::Error;

/// Errors raised by the model builders and identity checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("complex dimension m = {m} outside supported range {min}..={max}")]
    DimensionOutOfRange { m: usize, min: usize, max: usize },

    #[error("grading r = {r} outside 0..={m}")]
    GradingOutOfRange { r: i64, m: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "spinor component {index} does not lie in the grading-{r} subspace (residual {residual:e})"
    )]
    GradingMismatch {
        index: usize,
        r: usize,
        residual: f64,
    },

    #[error("invalid spin^c parameters: {0}")]
    InvalidParams(String),

    #[error("argument outside domain: {0}")]
    OutOfDomain(String),

    #[error("form is not effective: |Λω| = {residual:e}")]
    NotEffective { residual: f64 },

    #[error("form is not homogeneous of a single bidegree")]
    NotHomogeneous,

    #[error("Fourier cutoff exceeded: product degree {degree} > cutoff {cutoff}")]
    CutoffExceeded { degree: i32, cutoff: i32 },

    #[error("eigensolver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
