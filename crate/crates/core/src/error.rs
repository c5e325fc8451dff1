use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("pattern collision at ({0}, {1})")]
    PatternCollision(usize, usize),
    #[error("operation requires a finite backing")]
    TruncatedBacking,
    #[error("target of the comultiplication is not the tensor square of its source ({target} vs {expected})")]
    TargetMismatch { target: usize, expected: usize },
    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("eigenvalue clusters unresolvable at tolerance {tolerance:e}: {detail}")]
    UnresolvedClusters { tolerance: f64, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input must be a 0/1 matrix")]
    NotZeroOne,
}

pub type Result<T> = std::result::Result<T, Error>;
