//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// N = 0 grids are rejected everywhere.
    #[error("degenerate grid: polynomial degree must be at least 1")]
    DegenerateGrid,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The collocation matrix is numerically singular.
    #[error("singular collocation system (reciprocal condition {rcond:.3e})")]
    SingularSystem { rcond: f64 },

    /// Panel-doubled quadrature failed to reach agreement.
    #[error("quadrature did not converge after {evals} evaluations")]
    NonConverged { evals: usize },

    /// A bootstrap iteration made the fundamental-solution bound much worse.
    #[error("bootstrap bound diverged (history {history:?}); raise N")]
    Diverged { history: Vec<f64> },

    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),

    /// The eigenvector change-of-basis matrix is numerically singular.
    #[error("gamma matrix numerically singular")]
    SingularGamma,

    /// Bauer-Fike requires a diagonalizable matrix.
    #[error("matrix not diagonalizable (eigenvector condition {cond:.3e})")]
    NotDiagonalizable { cond: f64 },

    #[error("linear algebra backend error: {0}")]
    Linalg(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
