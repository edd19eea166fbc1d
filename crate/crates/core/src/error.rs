use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol universes do not match")]
    UniverseMismatch,

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported equation form: {0}")]
    UnsupportedForm(String),

    #[error("invalid exponent profile: {0}")]
    InvalidProfile(String),

    #[error("block size {p} does not divide {n}")]
    NotDivisible { p: u32, n: u32 },

    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("{what} exceeds cap ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("cannot eliminate: {0}")]
    CannotEliminate(String),

    #[error("candidate has {found} rows, equation has {expected}")]
    RowCountMismatch { expected: usize, found: usize },

    #[error("incomplete assignment: missing {0}")]
    IncompleteAssignment(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("binding error: {0}")]
    Binding(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
