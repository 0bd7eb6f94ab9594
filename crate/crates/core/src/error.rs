//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the numerical and symbolic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("divergent request: {0}")]
    Divergent(String),

    #[error("not available in exact mode: {0}")]
    ExactUnsupported(String),

    #[error("no convergence after {terms} terms (last tail bound {bound:e})")]
    NonConvergent { terms: usize, bound: f64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("completion cap exceeded: {0}")]
    CapExceeded(String),

    #[error("rewriting system is not complete")]
    Incomplete,

    #[error("element is not finite: {0}")]
    NotFinite(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("square root of q is not available in this field")]
    NoSqrt,
}

impl QError {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        QError::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, QError>;
