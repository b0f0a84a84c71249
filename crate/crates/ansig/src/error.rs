use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnsigError {
    #[error("degenerate shape: all landmarks collapse to a single point")]
    DegenerateShape,

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("sample count K mismatch: {a} vs {b}")]
    KMismatch { a: usize, b: usize },

    #[error("K must be a power of two and at least 8, got {0}")]
    BadK(usize),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("empty signature database")]
    EmptyDatabase,

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Format { path: String, msg: String },

    #[error("database version {found} not supported (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },

    #[error("image too small: {width}x{height}, need at least 3x3")]
    ImageTooSmall { width: usize, height: usize },

    #[error("polygon needs at least 3 points, got {0}")]
    TooFewPoints(usize),
}

pub type Result<T> = std::result::Result<T, AnsigError>;
