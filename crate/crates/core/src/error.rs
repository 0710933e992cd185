use thiserror::Error;

use crate::dynamics::Regime;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The requested quantity does not exist in the given damping regime.
    #[error("{what} requires {requirement} (got {regime:?} with p = {p}, 4k = {four_k})")]
    Regime {
        what: &'static str,
        requirement: &'static str,
        regime: Regime,
        p: f64,
        four_k: f64,
    },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),
}

impl WalkError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        WalkError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;
