use thiserror::Error;

/// Errors produced by the numerics in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not a density matrix: trace {trace}, min eigenvalue {min_eigenvalue:e}")]
    NotDensity { trace: f64, min_eigenvalue: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("eigenvalue {eigenvalue:e} is outside the domain of the function")]
    Domain { eigenvalue: f64 },

    #[error("argument has a component of size {magnitude:e} on the joint kernel")]
    KernelObstruction { magnitude: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid tensor dimensions: {0}")]
    InvalidDims(String),

    #[error("map is not trace preserving (max |sum K^dag K - I| = {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape_err(expected: impl Into<String>, got: impl Into<String>) -> Error {
    Error::ShapeMismatch {
        expected: expected.into(),
        got: got.into(),
    }
}
