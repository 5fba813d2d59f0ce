use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum RmtError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach the requested tolerance: {0}")]
    QuadratureAccuracy(String),

    #[error("fixed-point iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("pole encountered: {0}")]
    Pole(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),

    #[error("ODE integration aborted: {0}")]
    OdeBlowUp(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
