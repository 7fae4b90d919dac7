use thiserror::Error;

use crate::search::SearchReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis is singular (determinant 0)")]
    SingularBasis,

    #[error("rounded basis is singular; increase the scale factor")]
    SingularAfterRounding,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("more than one minimal notch candidate: {candidates:?}")]
    MultipleMinimalNotches { candidates: Vec<Vec<u32>> },

    #[error("not a covering: coset of {witness:?} is not reached within distance {d}")]
    NotACovering { witness: Vec<i64>, d: u64 },

    #[error("index cap {cap} reached before the search could prove optimality (best found {})", .report.f_value)]
    CapTooSmall { cap: u64, report: Box<SearchReport> },

    #[error("sample count must be positive")]
    BadSampleCount,

    #[error("value too large for this operation: {0}")]
    TooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
