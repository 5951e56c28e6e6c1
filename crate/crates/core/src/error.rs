use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular scalar divide")]
    SingularScalarDivide,
    #[error("singular matrix at column {column}")]
    SingularMatrix { column: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {n} exceeds split exactness budget")]
    SplitBudgetExceeded { n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse {0:?} as a decimal number")]
    Parse(String),
    #[error("zero true component at index {0}")]
    ZeroReference(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
