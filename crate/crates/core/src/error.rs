use thiserror::Error;

/// Errors raised by the symbolic core and the network front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must have at least one input letter (m >= 1), got m = {0}")]
    EmptyAlphabet(usize),

    #[error("unknown letter token `{0}`")]
    UnknownToken(String),

    #[error("letter x{index} is not in the alphabet x0..x{m}")]
    LetterOutOfRange { index: usize, m: usize },

    #[error("invalid coefficient `{0}`")]
    InvalidCoefficient(String),

    #[error("alphabet mismatch: x0..x{left} vs x0..x{right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("slot count mismatch: {left} vs {right}")]
    SlotMismatch { left: usize, right: usize },

    #[error("slot index {index} out of range 1..={n}")]
    SlotOutOfRange { index: usize, n: usize },

    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: String, found: String },

    #[error("not a Lie polynomial: {0}")]
    NotLie(String),

    #[error("not group-like: {0}")]
    NotGroupLike(String),

    #[error("output index {index} out of range (representation has {count} outputs)")]
    OutputOutOfRange { index: usize, count: usize },

    #[error("{path}: {message}")]
    Spec { path: String, message: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
