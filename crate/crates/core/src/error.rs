use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("singular matrix: zero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("trial basis has {trial} functions but {nodes} nodes were given")]
    InsufficientTrialBasis { trial: usize, nodes: usize },

    #[error("invalid node set: nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },

    #[error("invalid node set: {0}")]
    InvalidNodeSet(String),

    #[error("maxvol did not converge after {swaps} swaps (last rows {rows:?})")]
    MaxVolNotConverged { swaps: usize, rows: Vec<usize> },

    #[error("{subsets} candidate subsets exceed the exhaustive-search limit of {limit}")]
    TooManySubsets { subsets: u128, limit: u128 },

    #[error("enlarged interpolation system is singular (denominator {denominator:e})")]
    EnlargedSystemSingular { denominator: f64 },

    #[error("degenerate convex hull (measure {measure:e})")]
    DegenerateHull { measure: f64 },

    #[error("unsupported dimension {0}: only 2 and 3 are supported")]
    UnsupportedDimension(usize),

    #[error("invalid level {0}: must be at least 1")]
    InvalidLevel(usize),

    #[error("duplicate basis function {0}")]
    DuplicateBasisFunction(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
