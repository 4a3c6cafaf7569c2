use thiserror::Error;

/// Errors raised by the cone, form and group routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// A rank decision landed too close to the threshold to be trusted.
    #[error("unstable rank decision: singular value {value:.3e} is within a factor 10 of threshold {threshold:.3e}")]
    Degenerate { value: f64, threshold: f64 },

    /// Two Richardson estimates of a derivative disagreed.
    #[error("finite-difference estimates disagree by {gap:.3e} (coarse norm {coarse_norm:.3e}, fine norm {fine_norm:.3e})")]
    Richardson {
        gap: f64,
        coarse_norm: f64,
        fine_norm: f64,
        coarse: Vec<num_complex::Complex64>,
        fine: Vec<num_complex::Complex64>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Degenerate { .. } | Error::Richardson { .. } | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
