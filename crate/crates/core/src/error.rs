use thiserror::Error;

/// Errors raised by sketching, theory and index operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters are inconsistent with each other (sizes, universes, schemes).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation needs at least one element and got none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// The pair statistics describe a distribution with no support.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// Exhaustive enumeration was requested beyond the supported bound.
    #[error("enumeration bound exceeded: {what} = {value} > {max}")]
    EnumerationBound {
        what: &'static str,
        value: u64,
        max: u64,
    },

    /// A serialized index could not be decoded.
    #[error("format error: {0}")]
    Format(String),

    /// Reading or writing a serialized index failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::Format("truncated input".into()),
            _ => Error::Io(e.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
