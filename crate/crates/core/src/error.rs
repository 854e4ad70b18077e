use std::path::PathBuf;
use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not a PGM file (magic {found:?}, expected \"P2\" or \"P5\")")]
    BadMagic { path: PathBuf, found: String },

    #[error("{path}: maxval {maxval} exceeds 255 (only 8-bit PGM is supported)")]
    MaxvalTooLarge { path: PathBuf, maxval: u32 },

    #[error("{path}: truncated pixel data (expected {expected} samples, got {got})")]
    TruncatedData {
        path: PathBuf,
        expected: usize,
        got: usize,
    },

    #[error("{path}: malformed PGM: {reason}")]
    MalformedPgm { path: PathBuf, reason: String },

    #[error("image dimensions must be nonzero, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer holds {len} values, expected {width}x{height} = {expected}")]
    PixelCountMismatch {
        width: usize,
        height: usize,
        len: usize,
        expected: usize,
    },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("cannot decompose a {width}x{height} image into {levels} levels (needs both sides >= 2^levels)")]
    TooManyLevels {
        width: usize,
        height: usize,
        levels: usize,
    },

    #[error("decomposition depth must be at least 1")]
    ZeroLevels,

    #[error("pyramids are structurally incompatible: {0}")]
    PyramidMismatch(String),

    #[error("fusion weights must be finite, non-negative and sum to a positive value (got {0}, {1})")]
    InvalidWeights(f64, f64),

    #[error("invalid GA configuration: {0}")]
    InvalidGaConfig(String),

    #[error("intensity {0} is outside the [0, 255] domain")]
    OutOfDomain(f64),

    #[error("invalid fuzzy system: {0}")]
    InvalidFuzzySystem(String),

    #[error("{path}:{line}: {reason}")]
    FisParse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    /// A metric whose defining expression divides by zero for these inputs.
    /// Carried as a tagged value in reports, never silently zeroed.
    #[error("degenerate metric: {0}")]
    DegenerateMetric(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
