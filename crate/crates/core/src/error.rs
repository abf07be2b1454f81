use thiserror::Error;

/// Errors raised by model construction, evaluation and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inclusion-exclusion over {n} components exceeds the limit of {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("degenerate at t = {t}: {reason}")]
    Degenerate { t: f64, reason: String },

    #[error("integration failure at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn degenerate(t: f64, reason: impl Into<String>) -> Self {
        Error::Degenerate {
            t,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag, used by the CLI's structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Domain(_) => "domain",
            Error::SizeLimit { .. } => "size_limit",
            Error::Degenerate { .. } => "degenerate",
            Error::IntegrationFailure { .. } => "integration_failure",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
