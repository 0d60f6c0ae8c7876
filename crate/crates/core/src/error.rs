use thiserror::Error;

use crate::algebra::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),

    #[error("monomial {0} is not an element of {1}")]
    NotInRing(String, Ring),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("incompatible maps: {0}")]
    Incompatible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not a chain map")]
    NotChainMap,

    #[error("unknown built-in complex `{0}`")]
    UnknownBuiltin(String),

    #[error("grading shift {0} is not normalized; normalize the complex to shift 0 first")]
    NotNormalized(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
