use thiserror::Error;

/// Errors produced by associative-array construction, queries, and key
/// re-encoding.
#[derive(Debug, Error)]
pub enum AssocError {
    #[error("triple has an empty {0} key")]
    EmptyKey(&'static str),

    #[error("textual values must be non-empty")]
    EmptyTextValue,

    #[error("numeric values must be finite, got {0}")]
    NonFiniteNumber(f64),

    #[error("numeric zero is the empty value and cannot be stored")]
    ZeroValue,

    #[error("cannot mix textual and numeric values in one array")]
    MixedValueKinds,

    #[error("the sum collision policy requires numeric values")]
    SumRequiresNumeric,

    #[error("invalid row range: {lo:?} > {hi:?}")]
    InvalidRange { lo: String, hi: String },

    #[error("row positions are 1-based and need start <= stop, got ({start}, {stop})")]
    InvalidPosition { start: usize, stop: usize },

    #[error("row key {0:?} is not an unsigned decimal integer")]
    NonNumericRowKey(String),

    #[error("value {value} does not fit in {width} decimal digits")]
    KeyWidthOverflow { value: u64, width: usize },

    #[error("malformed triple on line {line}: {reason}")]
    MalformedTriple { line: usize, reason: String },

    #[error("text with tabs or newlines is not representable in the triple text format")]
    UnserializableText,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
