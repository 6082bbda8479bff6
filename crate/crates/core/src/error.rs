use alloc::string::String;

/// Errors surfaced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("rank confirmation failed after {attempts} attempts")]
    RankConfirmation { attempts: usize },
    #[error("not totally regular at level {level}: {what}")]
    NotTotallyRegular { level: usize, what: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch at {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },
    #[error("first integrals not found: {0}")]
    IntegralsNotFound(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
