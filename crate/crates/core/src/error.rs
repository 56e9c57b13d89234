use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("spectrum is singular (smallest value {smallest:.3e})")]
    Singular { smallest: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    #[error("invalid gamma {gamma}: must exceed {bound}")]
    InvalidGamma { gamma: f64, bound: f64 },

    #[error("unstable system: sigma_1 = {sigma1:.6} is not below 1")]
    Unstable { sigma1: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid leader pattern: {0}")]
    InvalidPattern(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::Singular { .. }
                | Error::NotSymmetric { .. }
        )
    }
}
