use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("matrix numerically singular in {op} (smallest singular value estimate {sigma_min:e})")]
    Singular { op: &'static str, sigma_min: f64 },

    #[error("{op} failed to converge: {detail}")]
    NoConvergence { op: &'static str, detail: String },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

impl LabError {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        LabError::Dimension { op, detail: detail.into() }
    }

    /// Name of the operation that produced the error, when known.
    pub fn operation(&self) -> Option<&'static str> {
        match self {
            LabError::Dimension { op, .. }
            | LabError::Singular { op, .. }
            | LabError::NoConvergence { op, .. } => Some(op),
            LabError::NonFinite(op) => Some(op),
            _ => None,
        }
    }
}
