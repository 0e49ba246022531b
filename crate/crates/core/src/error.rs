use thiserror::Error;

use crate::exterior::MultiIndex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    Degree { expected: usize, found: usize },

    #[error("frame dimension {0} is outside the supported range 1..={max}", max = crate::exterior::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("invalid multi-index {0:?}: indices must be strictly increasing within 1..=dim")]
    MultiIndex(Vec<usize>),

    #[error("operator contract violated: {0}")]
    Contract(String),

    #[error("Jacobi identity fails: d(d e{generator}) has coefficient {coefficient} on {monomial}")]
    Jacobi {
        generator: usize,
        monomial: MultiIndex,
        coefficient: String,
    },

    #[error("not a contact form: {0}")]
    ContactViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("metric error: {0}")]
    Metric(String),

    #[error("volume form is irrational: det of the 1-form Gram matrix is {0}, not a rational square")]
    IrrationalVolume(String),

    #[error("structure is not a verified Sasakian structure: {0}")]
    Unverified(String),

    #[error("structural check failed (input is not Sasakian?): {0}")]
    Structural(String),

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),

    #[error("fixture error at {path}: {message}")]
    Fixture { path: String, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
