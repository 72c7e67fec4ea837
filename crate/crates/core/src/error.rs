use thiserror::Error;

/// Errors produced by state construction, rearrangements and numerics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("singular filter: normalizing trace {0:.3e} is too close to zero")]
    SingularFilter(f64),

    #[error(
        "singular reduction (min eigenvalue {0:.3e}); rerun with eps > 0 to regularize the whitening step"
    )]
    SingularReduction(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
