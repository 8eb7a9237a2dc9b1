use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameter values outside the admissible range of a family.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid deletion set: {0}")]
    InvalidDeletionSet(String),

    #[error("interpolation abscissa {0} appears more than once")]
    DuplicateAbscissa(String),

    #[error("interpolation needs at least one point")]
    NoPoints,

    #[error("limit does not exist (pole) at t = {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree anomaly in {what}: expected {expected}, found {found}")]
    DegreeAnomaly {
        what: String,
        expected: usize,
        found: String,
    },

    /// A closed-form constant disagrees with the value forced by normalisation.
    #[error("constant mismatch for {what}: closed form {closed}, normalisation {derived}")]
    ConstantMismatch {
        what: String,
        closed: String,
        derived: String,
    },

    #[error("validation failed for {what} at x = {x}")]
    Validation { what: String, x: i64 },

    #[error("sum does not decay: {0}")]
    NonDecaying(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
