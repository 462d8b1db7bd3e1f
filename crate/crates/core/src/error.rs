use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not in ring: {0}")]
    NotInRing(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("ordering violation: {0}")]
    OrderingViolation(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// A hypothesis of a verifier does not hold; `witness` renders the
    /// offending element when there is one.
    #[error("hypothesis failed: {message}")]
    HypothesisFailed {
        message: String,
        witness: Option<String>,
    },

    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),

    #[error("filtration is not central: {0}")]
    NotCentral(String),

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
