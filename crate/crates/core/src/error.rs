use thiserror::Error;

use num_complex::Complex64;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),
    #[error("singular value: Gamma pole at argument {arg}")]
    Singular { arg: Complex64 },
    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },
    #[error("point outside the model domain: {0}")]
    Domain(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("truncation error too large: {what} (estimate {estimate:e})")]
    Truncation { what: String, estimate: f64 },
    #[error("complexified Iwasawa decomposition hit a branch obstruction at path parameter {at}")]
    Path { at: f64 },
    #[error("input violates the Weyl relation (residual {residual:e})")]
    WeylRelation { residual: f64 },
    #[error("point evaluation bound violated: |F(z)| = {value:e} > bound {bound:e}")]
    PointBound { value: f64, bound: f64 },
    #[error("calibration residual {0:e} above threshold")]
    Calibration(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown experiment `{name}`; valid names: {valid}")]
    UnknownExperiment { name: String, valid: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
