use thiserror::Error;

/// Errors raised by constructors and maps. Relation failures are not errors;
/// they are carried by [`crate::VerificationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {symbol} cannot be placed in slot {slot} of kind {kind}")]
    IncompatibleSlot {
        slot: usize,
        kind: String,
        symbol: String,
    },
    #[error("slot {slot} out of range for signature with {len} slots")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("slot {0} is not a circle slot")]
    NotACircleSlot(usize),
    #[error("generator {0} has no image")]
    MissingGenerator(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("map `{name}` is not defined for n = {n}")]
    UnsupportedIndex { name: String, n: i64 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("sphere blocks must be lifted to Toeplitz representatives first")]
    SphereBlockNotLifted,
    #[error("parse error at {line}:{column}: {message} (expected one of: {})", expected.join(", "))]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
