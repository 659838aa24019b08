use std::io;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by graph construction, record I/O, and batch runs.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value failed a domain check; `field` names the offending input.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// A line of a record file could not be parsed or validated.
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    /// A line-delimited export failed partway; `written` records made it out.
    #[error("write failed after {written} records: {source}")]
    PartialWrite { written: usize, source: io::Error },

    /// A solved result violated one of the guarantees re-checked after every
    /// solve. Signals a bug in this crate, not bad input.
    #[error("invariant violation for prompt {prompt_key:?}: {detail}")]
    InvariantViolation { prompt_key: String, detail: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
