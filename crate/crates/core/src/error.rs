use thiserror::Error;

/// Errors produced while building or analysing a sampling problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("sampling problem is infeasible: cos(phi_GU) = {cos_phi:.3e}")]
    Infeasible { cos_phi: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
