use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("decomposition did not converge: {0}")]
    NoConvergence(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("wrong family: {0}")]
    WrongFamily(String),
    #[error("outside the proven domain: {reason}")]
    DomainNotCovered { value: Option<f64>, reason: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
