use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix must be square with at least one row (got {rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not skew-symmetric (max |W + Wᵀ| = {asymmetry:e})")]
    NotSkew { asymmetry: f64 },

    #[error("rotation axis must be unit length (norm = {norm})")]
    NotUnitAxis { norm: f64 },

    #[error("rotation axis must be nonzero and finite")]
    DegenerateAxis,

    #[error("eigenvalues must be non-increasing (λ[{index}] = {prev} < λ[{next_index}] = {next})", next_index = index + 1)]
    Unsorted { index: usize, prev: f64, next: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix is not the square of a skew-symmetric matrix")]
    NotMember,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("at least {required} instants are required, got {actual}")]
    TooFewInstants { required: usize, actual: usize },

    #[error("reference signal has zero L² norm")]
    ZeroDenominator,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
