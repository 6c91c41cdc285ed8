use thiserror::Error;

/// Errors raised by the analysis routines and the frame-file reader.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error(
        "matrix is not hermitian (deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix has no columns")]
    EmptyMatrix,

    #[error("matrix is singular (sigma_min {sigma_min:.3e}, operator norm {op_norm:.3e})")]
    Singular { sigma_min: f64, op_norm: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("family is not a frame (lower bound {lower:.3e})")]
    NotAFrame { lower: f64 },

    #[error("invalid exponent p = {0}; p must be at least 1")]
    InvalidExponent(f64),

    #[error("exponents p = {p}, q = {q} are not conjugate (1/p + 1/q must equal 1)")]
    ExponentMismatch { p: f64, q: f64 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension {dim} too large for brute-force sampling (max {max})")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("malformed frame file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
