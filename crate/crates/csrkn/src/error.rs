//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("stage count {0} is outside the supported range 1..=32")]
    StageCountOutOfRange(usize),

    #[error("Newton iteration for Gauss nodes did not converge (s = {stages}, node {node})")]
    NodeSolveFailed { stages: usize, node: usize },

    #[error("free coefficient index ({i},{j}) violates the bounds i >= {min_i}, j >= {min_j}")]
    FreeCoefficientOutOfRange {
        i: u32,
        j: u32,
        min_i: u32,
        min_j: u32,
    },

    #[error("unsupported method order {0}; the built-in families have order 4, 6 or 8")]
    UnsupportedOrder(u32),

    #[error("mass matrix must be {dim}x{dim}, symmetric, with finite entries")]
    InvalidMassMatrix { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid stepper config: {0}")]
    InvalidConfig(String),

    #[error(
        "stage iteration did not converge after {iterations} iterations \
         (residual {residual:.3e}); the step size is likely too large for this problem"
    )]
    StageNonConvergence { iterations: usize, residual: f64 },

    #[error("non-finite value encountered in stage {stage} of the step starting at t = {t}")]
    NonFiniteStage { stage: usize, t: f64 },

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("convergence cell (method {method}, h = {h}) failed: {source}")]
    CellFailed {
        method: String,
        h: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown problem '{name}'; available: {available}")]
    UnknownProblem { name: String, available: String },

    #[error("invalid tableau data: {0}")]
    TableauFormat(String),

    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("step budget exceeded: T/h = {ratio:.3e} is above the guard of 1e8")]
    StepBudgetExceeded { ratio: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
