//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of geometry, quadrature and verification routines.
///
/// Errors are `Clone` so that per-run failures can be stored in reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("point lies on the singular set (rho = 0)")]
    Origin,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight is singular on the integration region: {0}")]
    SingularWeight(String),
    #[error("inadmissible parameters: {0}")]
    Admissibility(String),
    #[error("test function is not real-valued: {0}")]
    Realness(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HardyError {
    /// Short machine-readable kind tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            HardyError::Origin => "origin",
            HardyError::Domain(_) => "domain",
            HardyError::SingularWeight(_) => "singular_weight",
            HardyError::Admissibility(_) => "admissibility",
            HardyError::Realness(_) => "realness",
            HardyError::NonFinite(_) => "non_finite",
            HardyError::Config(_) => "config",
            HardyError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for HardyError {
    fn from(e: std::io::Error) -> Self {
        HardyError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HardyError>;
