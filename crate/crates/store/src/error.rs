use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("table {0:?} already exists")]
    TableExists(String),

    #[error("table {0:?} does not exist")]
    TableNotFound(String),

    #[error("unknown option key {0:?}")]
    UnknownOption(String),

    #[error("invalid value {value:?} for option {key:?}")]
    InvalidOptionValue { key: String, value: String },

    #[error("invalid splits: {0}")]
    InvalidSplits(String),

    #[error("invalid store config: {0}")]
    InvalidConfig(String),

    #[error("batch writer is closed")]
    WriterClosed,

    #[error("invalid scan range: {lo:?} > {hi:?}")]
    InvalidRange { lo: String, hi: String },

    #[error("tablet index {0} out of range")]
    TabletIndex(usize),

    #[error("malformed split file, line {line}: {reason}")]
    SplitFileFormat { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
