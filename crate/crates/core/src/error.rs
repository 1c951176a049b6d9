use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("A0 is numerically singular")]
    SingularA0,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vacuous subspace: positivity on an empty basis is undefined")]
    VacuousSubspace,
    #[error("constraint subspace not invariant: check condition (C) (residual {0:e})")]
    NotInvariant(f64),
    #[error("constraint violated by initial data (residual {0:e})")]
    ConstraintViolated(f64),
    #[error("no admissible value found: {0}")]
    SearchFailed(String),
    #[error("quadrature did not converge: {0}; widen s range")]
    Quadrature(String),
    #[error("{0}")]
    Precondition(String),
    #[error("model parse error: {0}")]
    Parse(String),
    #[error("plot error: {0}")]
    Plot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
