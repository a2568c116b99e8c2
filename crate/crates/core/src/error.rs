use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// The group centroid coincides with the context centroid, so the
    /// centroid line is undefined.
    #[error("group centroid coincides with context centroid (squared distance {d_fg:e})")]
    CoincidentCentroids { d_fg: f64 },

    /// The context has no dispersion about the requested point.
    #[error("degenerate context: {0}")]
    DegenerateContext(String),

    #[error("complementary group undefined: {0}")]
    ComplementUndefined(String),

    #[error("unsupported feature dimension {found}, expected {expected}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by degenerate geometry rather than by malformed input.
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::CoincidentCentroids { .. } | Error::DegenerateContext(_)
        )
    }
}
