use tablestack_assoc::AssocError;
use tablestack_graphgen::GenError;
use tablestack_store::StoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    InvalidConfig(String),

    #[error("setup step {step} failed: {source}")]
    SetupStep {
        step: u8,
        #[source]
        source: Box<BenchError>,
    },

    #[error("split file is stale: {0}")]
    StaleSplitFile(String),

    #[error("server {0} owns no tablets")]
    NoLocalTablets(usize),

    #[error("worker {pid} failed: {source}")]
    Worker {
        pid: usize,
        #[source]
        source: Box<BenchError>,
    },

    #[error("worker panicked during execution")]
    WorkerPanic,

    #[error("conservation violated: {0}")]
    Conservation(String),

    #[error("malformed {what}: {reason}")]
    Format { what: String, reason: String },

    #[error(transparent)]
    Store(#[from] StoreError),

    #[error(transparent)]
    Gen(#[from] GenError),

    #[error(transparent)]
    Assoc(#[from] AssocError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
