use tablestack_assoc::AssocError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("scale must be between 1 and {max}, got {got}")]
    InvalidScale { got: u32, max: u32 },

    #[error("edge factor must be positive")]
    InvalidEdgeFactor,

    #[error("quadrant probabilities must be non-negative and sum to 1, got {0:?}")]
    InvalidProbabilities([f64; 4]),

    #[error("cannot redraw self edges when both off-diagonal probabilities are zero")]
    UndrawableSelfEdges,

    #[error("key width {width} cannot encode vertex ids up to {max_id}")]
    KeyWidthTooSmall { width: usize, max_id: u64 },

    #[error("degree fit needs at least two distinct degrees")]
    DegreeFitUndefined,

    #[error("malformed edge list, line {line}: {reason}")]
    MalformedEdgeList { line: usize, reason: String },

    #[error(transparent)]
    Assoc(#[from] AssocError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
