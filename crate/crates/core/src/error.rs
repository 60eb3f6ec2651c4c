use thiserror::Error;

/// Errors raised by constructors, actions and compositions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An index or dimension outside the allowed range.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two maps or simplices that cannot be composed.
    #[error("composition error: {0}")]
    Composition(String),
    /// Local sections that do not agree on the overlap.
    #[error("compatibility error: {0}")]
    Compatibility(String),
    /// A value that violates the invariants of its type.
    #[error("invalid value: {0}")]
    Invalid(String),
    /// Malformed external input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)).into())
    };
}
pub(crate) use bail;
