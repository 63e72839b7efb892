use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} = {value} out of range: {bound}")]
    ParamOutOfRange {
        name: &'static str,
        value: i64,
        bound: String,
    },

    #[error("graph has {0} vertices; at most 64 are supported")]
    TooManyVertices(usize),

    #[error("graph has an odd number of vertices ({0})")]
    OddVertexCount(usize),

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid vertex map: {0}")]
    InvalidMap(String),

    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
