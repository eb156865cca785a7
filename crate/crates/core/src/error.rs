use thiserror::Error;

use crate::linalg::NormEstimate;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("power iteration did not converge after {} iterations (estimate {})", .estimate.iterations, .estimate.value)]
    NotConverged { estimate: NormEstimate },

    #[error("invalid length: need at least {needed}, got {got}")]
    InvalidLength { needed: usize, got: usize },

    #[error("invalid offset {offset}: {reason}")]
    InvalidOffset { offset: usize, reason: &'static str },

    #[error("invalid window {window} for dimension {dim}")]
    InvalidWindow { window: usize, dim: usize },

    #[error("invalid number of modes {0} (expected 1..=14)")]
    InvalidModes(usize),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn dim_err(msg: impl Into<String>) -> LabError {
    LabError::InvalidDimension(msg.into())
}
