use crate::Complex;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid degree: requested {requested}, polynomial has degree {actual}")]
    InvalidDegree { requested: usize, actual: usize },

    #[error("pole at z = {z}")]
    Pole { z: Complex },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("power-series denominator has a zero constant term")]
    ZeroConstantTerm,

    #[error("no convergence within {depth} steps (last = {last}, previous = {prev})")]
    Convergence {
        depth: usize,
        last: Complex,
        prev: Complex,
    },

    #[error("validity error at index {index}: {reason}")]
    Validity { index: usize, reason: String },

    #[error("degenerate at index {index}: {reason}")]
    Degenerate { index: usize, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
