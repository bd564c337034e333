use thiserror::Error;

/// Errors produced by validation and decoding operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has no rows")]
    EmptyMatrix,

    #[error("matrix is not rectangular: row {row} has {found} entries, expected {expected}")]
    NonRectangular {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row} sums to {sum}, expected 1 within tolerance")]
    RowNotNormalized { row: usize, sum: f64 },

    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("need at least 2 states, got {states}")]
    TooFewStates { states: usize },

    #[error("state {state} at position {index} out of range for {states} states")]
    StateOutOfRange {
        index: usize,
        state: usize,
        states: usize,
    },

    #[error("sequence is empty")]
    EmptySequence,

    #[error("dimension mismatch: matrix has {left} states, model has {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("window of {width} samples exceeds signal length {samples}")]
    WindowTooLong { width: usize, samples: usize },

    #[error("instance too large for exhaustive search: {what} is {value}, limit {limit}")]
    InstanceTooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite input: {0}")]
    NonFiniteInput(String),

    #[error("length mismatch: ground truth has {left} samples, estimate has {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("evaluation range is empty or out of bounds")]
    EmptyEvaluationRange,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
