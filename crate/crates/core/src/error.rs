use thiserror::Error;

/// Errors produced by instance handling, the solvers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for {len} shapes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("touch time of shape {0} with itself is undefined")]
    SameIndex(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("{algorithm}: algorithm requires {required} shape")]
    UnsupportedShape {
        algorithm: &'static str,
        required: &'static str,
    },
    #[error("need at least {needed} shapes, got {got}")]
    TooFewShapes { needed: usize, got: usize },
    #[error("{algorithm} is limited to {max} shapes, got {got}")]
    TooManyShapes {
        algorithm: &'static str,
        max: usize,
        got: usize,
    },
    #[error("centers {0} and {1} cannot be separated within {2} quadtree levels")]
    ResolutionExceeded(usize, usize, u32),
    #[error("lower envelope needs at least one segment")]
    EmptyEnvelope,
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
