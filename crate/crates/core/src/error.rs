use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("singular configuration: |x_{i} - x_{j}| = {gap:e} below guard {guard:e}")]
    Singular { i: usize, j: usize, gap: f64, guard: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid node lies on a singularity at index {0}")]
    NodeOnSingularity(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
