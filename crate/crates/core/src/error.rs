use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected an integer matrix, found non-integral entry {0}")]
    NonInteger(String),
    #[error("vector is not contained in the lattice")]
    NotInLattice,
    #[error("not a sublattice of the given lattice")]
    NotSublattice,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("lattices live in different ambient spaces or carry different forms")]
    AmbientMismatch,
    #[error("class is not primitive")]
    NotPrimitive,
    #[error("class has non-positive square {0}")]
    NotPositive(String),
    #[error("class is not exceptional: {0}")]
    NotExceptional(String),
    #[error("matrix is singular")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("identity check failed: {0}")]
    CheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
