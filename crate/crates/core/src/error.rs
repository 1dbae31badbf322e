//! Error types shared by the whole crate.

use thiserror::Error;

/// Coarse classification used by callers that map errors to process exit
/// codes: misuse of the API surface versus malformed input data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Caller passed invalid parameters (bad `k`, out-of-range index, ...).
    Usage,
    /// The input data itself is malformed (ragged CSV, non-numeric cell, ...).
    Data,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },

    #[error("cannot parse {cell:?} as a number at row {row}, column {col}")]
    NonNumericCell {
        row: usize,
        col: usize,
        cell: String,
    },

    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("k must be in 1..={n}, got {k}")]
    InvalidK { k: usize, n: usize },

    #[error("medoid list is empty")]
    EmptyMedoids,

    #[error("medoid index {index} out of range for {n} points")]
    MedoidOutOfRange { index: usize, n: usize },

    #[error("medoid index {index} appears more than once")]
    DuplicateMedoid { index: usize },

    #[error("medoid position {position} out of range for {k} medoids")]
    PositionOutOfRange { position: usize, k: usize },

    #[error("delta must lie in (0, 1), got {delta}")]
    InvalidDelta { delta: f64 },

    #[error("{what} must be positive")]
    NotPositive { what: &'static str },

    #[error("invalid synthetic spec {spec:?}: expected CLUSTERS,PER_CLUSTER,DIM[,SPREAD]")]
    InvalidSyntheticSpec { spec: String },
}

impl Error {
    /// Whether this error stems from malformed input data rather than API
    /// misuse. Drives the CLI's exit-code split (1 = usage, 2 = data).
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyDataset
            | Error::RaggedRow { .. }
            | Error::NonFiniteValue { .. }
            | Error::NonNumericCell { .. }
            | Error::Io { .. }
            | Error::Csv { .. } => ErrorKind::Data,
            _ => ErrorKind::Usage,
        }
    }
}
