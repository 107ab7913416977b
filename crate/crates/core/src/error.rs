use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the contract they break: `input error` means the
/// caller handed in inconsistent data (wrong rank, class outside the cone),
/// `model error` means the supplied lattice model itself cannot support the
/// requested computation (a search would not terminate).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: rank mismatch in {context}: expected {expected}, got {got}")]
    RankMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("input error: integer overflow in {context}")]
    Overflow { context: &'static str },

    #[error("input error: {context}: {vector} is not a member of the cone")]
    NotInCone {
        context: &'static str,
        vector: String,
    },

    #[error("input error: ray direction must be a nonzero cone member, got {vector}")]
    InvalidRay { vector: String },

    #[error("model error: {functional} is not strictly positive on cone generator {generator}; bounded enumeration would not terminate")]
    NonPositiveOnGenerator {
        functional: String,
        generator: String,
    },

    #[error("geometry validation error: {0}")]
    Geometry(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("bounds too small: {0}")]
    BoundsTooSmall(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
