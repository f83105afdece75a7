use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("degenerate simplex: vertex differences are linearly dependent")]
    DegenerateSimplex,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("enumeration budget exceeded in {task}: needs {needed}, budget {budget}")]
    BudgetExceeded {
        task: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("count overflow: {0}")]
    CountOverflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("catalog verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
