use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tensor shape {factors:?} does not match matrix dimension {dim}")]
    ShapeMismatch { factors: Vec<usize>, dim: usize },

    #[error("subsystem index {index} out of range for {count} factors")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |m - m^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("modulus is not irreducible over GF({p})")]
    ReducibleModulus { p: u32 },

    #[error("unsupported field GF({p}^{m})")]
    UnsupportedField { p: u32, m: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("unsupported dimension d = {d}; supported: {supported}")]
    UnsupportedDimension { d: usize, supported: &'static str },

    #[error("coefficients sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("state of dimension {dim} exceeds the size guard of {limit}")]
    SizeGuard { dim: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
