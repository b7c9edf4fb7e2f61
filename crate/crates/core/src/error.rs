use thiserror::Error;

/// Errors produced by the phase-locking toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {n} is too small (need at least {min})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("vector is not mean-zero (sum = {sum:e}, tolerance {tolerance:e})")]
    NotMeanZero { sum: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex family is empty")]
    EmptyFamily,

    #[error("{what} is too large to materialize (n = {n}, limit {limit})")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("unsupported polytope for this operation: {0}")]
    UnsupportedSpec(String),

    #[error("could not parse polytope spec {input:?}: {reason}")]
    SpecParse { input: String, reason: String },

    #[error("linear program is infeasible (residual {residual:e})")]
    LpInfeasible { residual: f64 },

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("linear program exceeded {limit} simplex iterations")]
    LpIterationLimit { limit: usize },

    #[error("distribution is not in the Gumbel class: {0}")]
    NotGumbelClass(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
