use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition (bad sizes, ranges, shapes).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("maps are defined on different augmented grids")]
    GridMismatch,

    #[error("sample count {samples} does not match grid size {grid}")]
    SizeMismatch { samples: usize, grid: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the
    /// environment. The CLI maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_)
                | Error::GridMismatch
                | Error::SizeMismatch { .. }
                | Error::DimensionMismatch { .. }
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}
