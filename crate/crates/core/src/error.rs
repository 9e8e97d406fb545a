use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("map is not completely positive (Choi eigenvalue {0:.3e})")]
    NotCp(f64),
    #[error("map is not trace preserving (defect {0:.3e})")]
    NotTracePreserving(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("channel is already extremal")]
    AlreadyExtremal,
    #[error("channel is not extremal")]
    NotExtremal,
    #[error("decomposition needs more than {0} terms")]
    TooManyTerms(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
