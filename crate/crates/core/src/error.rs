use thiserror::Error;

/// Errors raised by the numeric core. Residuals are carried as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch { op: &'static str, left: usize, right: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("{what}: expected {expected} entries, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },

    #[error("non-finite entry")]
    NonFinite,

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not anti-Hermitian (residual {residual:e})")]
    NotAntiHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("too many columns: {count} exceeds dimension {dim}")]
    TooManyColumns { count: usize, dim: usize },

    #[error("pointer {index} is degenerate (norm {norm:e})")]
    DegeneratePointer { index: usize, norm: f64 },

    #[error("precondition `{check}` failed: {detail}")]
    Precondition { check: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
