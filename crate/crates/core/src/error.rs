use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from its conjugate partner by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not positive semidefinite: eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension {requested} exceeds the configured limit {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("{0}")]
    Domain(String),

    #[error("series at r = {r} did not converge within {max_terms} terms")]
    Convergence { r: f64, max_terms: usize },

    #[error("truncation N = {dim} leaves trace deficit {deficit:e}; try N >= {suggested}")]
    Truncation {
        dim: usize,
        deficit: f64,
        suggested: usize,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
