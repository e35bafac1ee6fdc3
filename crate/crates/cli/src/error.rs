use thiserror::Error;

/// Errors from parsing, running and (de)serializing scripts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    Unknown {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: {msg}")]
    Arity {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("statement {stmt}: {msg}")]
    Runtime { stmt: usize, msg: String },
    #[error(transparent)]
    Core(#[from] indsheaf::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("version mismatch: {0}")]
    Version(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("bad argument: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
