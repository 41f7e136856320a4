use thiserror::Error;

/// Errors produced while building or running a walk.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    /// Inconsistent configuration: dimension mismatches, unsatisfiable stop rules, bad ranges.
    #[error("configuration error: {0}")]
    Config(String),

    /// A parameter outside its mathematical domain (coin parameter, dimension, distance).
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violated an operation precondition (for example a non-normalized initial state).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested problem does not fit the configured memory budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An iterative solver stopped without reaching its tolerance.
    #[error("{method} did not converge: residual {residual:e} after {iterations} iterations")]
    Convergence { method: &'static str, residual: f64, iterations: usize },

    /// A numerical procedure produced values that violate a known bound.
    #[error("numerical instability: {0}")]
    Instability(String),
}

pub type Result<T> = std::result::Result<T, WalkError>;
