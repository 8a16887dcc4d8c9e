use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A textual value (point, finite set, interval union) failed to parse.
    #[error("invalid {kind} `{text}`: {reason}")]
    InvalidValue {
        kind: &'static str,
        text: String,
        reason: String,
    },

    /// A formula failed to parse.
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    /// A symbol was used outside the signature it belongs to, or with the wrong arity.
    #[error("signature error: {0}")]
    Signature(String),

    /// An operation was called outside its documented precondition.
    #[error("precondition violated in {op}: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    /// Quantifier or oracle enumeration would exceed the point cap.
    #[error("pool of {size} points exceeds the enumeration cap of {cap}")]
    PoolTooLarge { size: usize, cap: usize },

    /// A formula lies outside the fragment a transformation accepts.
    #[error("fragment error: {0}")]
    Fragment(String),

    #[error("evaluation error: {0}")]
    Eval(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Precondition {
        op,
        reason: reason.into(),
    }
}
