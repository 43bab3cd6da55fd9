use thiserror::Error;

use crate::form::DiffForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("context mismatch: {left} variables vs {right} variables")]
    ContextMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("expected homogeneous degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: String },

    #[error("3-form is not closed; dH = {0}")]
    NotClosed(DiffForm),

    #[error("brace takes at most {arity} insertions, got {got}")]
    TooManyInsertions { arity: usize, got: usize },

    #[error("series is not a Maurer-Cartan element: defect nonzero at order {order}")]
    NotMaurerCartan { order: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
