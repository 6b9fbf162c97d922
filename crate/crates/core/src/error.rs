use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("size limit exceeded: {what} needs {size} entries (limit {limit})")]
    SizeLimit {
        what: String,
        size: u128,
        limit: u128,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires an automorphism but none was supplied")]
    MissingAutomorphism,

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator `{name}` at column {column}")]
    UnknownGenerator { name: String, column: usize },

    #[error("rewriting did not terminate within {0} steps")]
    Nontermination(usize),

    #[error("Clifford relation fails for generators e_{} and e_{}", .first + 1, .second + 1)]
    RelationViolation { first: usize, second: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Guard against building chain spaces or tables that would not fit in memory.
pub(crate) fn check_size(what: &str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::SizeLimit {
            what: what.to_string(),
            size,
            limit,
        })
    } else {
        Ok(())
    }
}
