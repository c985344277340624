use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("centered Gram of side {dim}x{dim} is too large (limit {limit}); use the other side or the direct strategy")]
    GramTooLarge { dim: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigen/singular value solver failed to converge: {0}")]
    Solver(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: empty file")]
    EmptyFile { path: PathBuf },

    #[error("{path}: line {line} has {found} fields, expected {expected}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: non-numeric value {value:?} at line {line}, column {column}")]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: usize,
        value: String,
    },

    #[error("{path}: malformed delimited text: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("dataset {name}: expected n={expected_n}, p={expected_p} but found n={n}, p={p}")]
    DimensionMismatch {
        name: String,
        expected_n: usize,
        expected_p: usize,
        n: usize,
        p: usize,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
