use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("plane dimension s={s} out of range for a {dim}-dimensional matrix")]
    PlaneOrderOutOfRange { s: usize, dim: usize },

    #[error("not a Latin hypercube: {0}")]
    NotLatin(String),

    #[error("coefficient {index} ({coeff}) is not coprime to the order {order}")]
    CoefficientNotCoprime { index: usize, coeff: i64, order: usize },

    #[error("not a permutation matrix: {0}")]
    NotPermutationMatrix(String),

    #[error("not polystochastic: {0}")]
    NotPolystochastic(String),

    #[error("negative entry at {0:?}")]
    NegativeEntry(Vec<usize>),

    #[error("not a transversal: {0}")]
    NotTransversal(String),

    #[error("invalid convex combination: {0}")]
    InvalidCombination(String),

    #[error("Delta-sum {found} contradicts the expected residue {expected} mod {order}")]
    DeltaSumViolated { found: usize, expected: usize, order: usize },

    #[error("undecided: {what} exceeded the cap of {cap} nodes")]
    CapExceeded { what: &'static str, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
