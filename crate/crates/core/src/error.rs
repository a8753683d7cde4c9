use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {allowed:e}")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("family is not a frame: smallest frame-operator eigenvalue {lambda_min:e}")]
    NotAFrame { lambda_min: f64 },

    #[error("family is not an atomic system for the operator: range residual {residual:e}")]
    NotAtomicForL { residual: f64 },

    #[error("point outside the kernel domain: {0}")]
    DomainViolation(String),

    #[error("not available: {0}")]
    NotAvailable(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),

    #[error("weight is not radial")]
    NonRadialWeight,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonFinite(_) | Error::QuadratureDivergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
