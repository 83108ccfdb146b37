use thiserror::Error;

/// Errors raised by the integrators, solvers and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("nonlinear iteration did not converge after {iterations} iterations (last update norm {final_residual_norm:e})")]
    NonConvergence {
        iterations: usize,
        final_residual_norm: f64,
    },

    #[error("non-finite iterate at iteration {iteration}")]
    NumericalBreakdown { iteration: usize },

    #[error("right-hand side produced non-finite values at quadrature node {node}")]
    NonFiniteRhs { node: usize },

    #[error("singular matrix in dense factorization")]
    SingularMatrix,

    #[error("linear part has no diagonal or block-diagonal structure")]
    UnstructuredLinearPart,

    #[error("spectral order selection reached s_max = {s_max} without meeting the truncation criterion")]
    OrderSelectionFailure { s_max: usize },

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("run with n = {n} failed: {source}")]
    RunFailed {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
