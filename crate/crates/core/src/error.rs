use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, found {found_rows}x{found_cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        found_rows: usize,
        found_cols: usize,
    },

    #[error("not a permutation of 1..={size}: {images:?}")]
    NotAPermutation { size: usize, images: Vec<usize> },

    #[error("invalid partial permutation: {0}")]
    InvalidPartialPermutation(String),

    #[error("rank {t} out of range for a {rows}x{cols} grid")]
    RankOutOfRange { t: usize, rows: usize, cols: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{w:?} is not a leaf index for M({m},{n})")]
    NotALeafIndex { w: Vec<usize>, m: usize, n: usize },

    #[error("invalid sigma tuple: {0}")]
    InvalidSigma(String),

    #[error("invalid echelon pattern: {0}")]
    InvalidPattern(String),

    #[error("double Bruhat cell is empty")]
    EmptyCell,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
