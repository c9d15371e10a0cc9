use thiserror::Error;

/// Errors produced by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error(
        "matrix is not positive definite (eigenvalues in [{min_eigenvalue:e}, {max_eigenvalue:e}])"
    )]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("{function} is undefined at eigenvalue {value:e}")]
    SpectralDomain { function: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    EigenNonConvergence { sweeps: usize, residual: f64 },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("subspace is empty")]
    EmptySubspace,
}

impl Error {
    /// True for failures of an iterative method to reach its tolerance.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            Error::EigenNonConvergence { .. } | Error::NonConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
