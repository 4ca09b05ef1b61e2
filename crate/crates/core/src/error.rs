use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },

    #[error("matrix is not normal (residual {residual:e})")]
    NonNormal { residual: f64 },

    #[error("matrix is not conjugate-normal (residual {residual:e})")]
    NotConjugateNormal { residual: f64 },

    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("det(A) / det((A - A^T)/2) = {re:e}{im:+e}i is not positive real")]
    RatioNotPositive { re: f64, im: f64 },

    #[error("inconsistent spectrum of A A*: {0}")]
    SpectralConsistency(String),

    #[error("Pfaffian undefined: A A* has the positive real eigenvalue {omega} and A is non-singular")]
    PositiveRealEigenvalue { omega: f64 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("polynomial Pfaffian limited to dimension {max}, got {dim}")]
    SizeGuard { dim: usize, max: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid spectrum specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
