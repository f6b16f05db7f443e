use thiserror::Error;

/// Errors raised by the estimation, projection and experiment routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GdsError {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in {context} at index {index}")]
    NonFinite { context: &'static str, index: usize },

    #[error("matrix is not positive semidefinite: smallest eigenvalue estimate {min_eigenvalue:e} (spectral radius {spectral_radius:e})")]
    NotPositiveSemidefinite {
        min_eigenvalue: f64,
        spectral_radius: f64,
    },

    #[error("matrix is not symmetric: max relative asymmetry {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },

    #[error("mu = {mu:e} must exceed twice the spectral radius of A^T A ({bound:e}) for the linearized iteration to converge")]
    StepTooLarge { mu: f64, bound: f64 },

    #[error("iterates became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("no admissible (s, r) pair for projection (k = {k}, lambda = {lambda:e}, x = {x:?})")]
    NoAdmissiblePair { k: usize, lambda: f64, x: Vec<f64> },

    #[error("fast and naive projections disagree by {deviation:e} (k = {k}, lambda = {lambda:e}, x = {x:?})")]
    ProjectionMismatch {
        k: usize,
        lambda: f64,
        deviation: f64,
        x: Vec<f64>,
    },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Contract(String),
}

impl GdsError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        GdsError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn dims(
        context: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        GdsError::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            GdsError::NoAdmissiblePair { .. } | GdsError::ProjectionMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GdsError>;
