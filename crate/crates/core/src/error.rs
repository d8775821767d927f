//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexError {
    /// Input bytes are not valid UTF-8.
    #[error("invalid UTF-8 input: {0}")]
    Encoding(String),

    /// A span does not lie inside its document.
    #[error("span [{start}, {end}) out of range for document of length {len}")]
    SpanOutOfRange { start: usize, end: usize, len: usize },

    /// A data file row could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// A data file row violates the schema (unknown enum value, missing field).
    #[error("schema error at line {line}: {message}")]
    Schema { line: u64, message: String },

    /// A function argument violates its precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Model training could not proceed (e.g. single-class labels).
    #[error("training error: {0}")]
    Training(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LexError>;
