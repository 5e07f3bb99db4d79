//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty polytope")]
    EmptyPolytope,

    #[error("degenerate polytope: {0}")]
    Degenerate(String),

    #[error("unbounded halfspace system")]
    Unbounded,

    #[error("boundary coefficient out of range: {0}")]
    CoefficientRange(String),

    #[error("divisor is not ample: {0}")]
    NotAmple(String),

    #[error("divisor is not nef: {0}")]
    NotNef(String),

    #[error("divisor is not effective: {0}")]
    NotEffective(String),

    #[error("divisor is not Q-Cartier on this fan: {0}")]
    NotQCartier(String),

    #[error("pair is not klt: {0}")]
    NotKlt(String),

    #[error("function is not convex: {0}")]
    NonConvex(String),

    #[error("ceiling must exceed the maximum of the function: {0}")]
    CeilingTooSmall(String),

    #[error("non-integral data where integers are required: {0}")]
    NotIntegral(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("not enough admissible sample points to fit: {0}")]
    FitTooShort(String),

    #[error("singular linear system")]
    SingularSystem,

    #[error("vector lies outside the fan support")]
    OutsideFan,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
