//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors produced by cloud construction, encoding, decoding and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("degenerate point cloud: all points coincide")]
    DegenerateCloud,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid resolution {0}: must be at least {1}")]
    InvalidResolution(usize, usize),

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("cloud is not normalized (max point norm {max_norm:.6}); normalize it or enable the unnormalized override")]
    CloudNotNormalized { max_norm: f64 },

    #[error("point {index} lies outside the [-1, 1]^3 grid domain")]
    PointOutOfDomain { index: usize },

    #[error("invalid truncation {0}: must be positive")]
    InvalidTruncation(f64),

    #[error("basis mismatch: encoding was computed against a different basis point set")]
    BasisMismatch,

    #[error("kind mismatch: {0}")]
    KindMismatch(&'static str),

    #[error("attribute table has {got} rows but the source cloud has {expected} points")]
    AttributeCardinalityMismatch { expected: usize, got: usize },

    #[error("encoding carries no nearest-point indices (deserialized encodings drop them)")]
    MissingNearestIndices,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("mesh has zero total surface area")]
    ZeroAreaMesh,

    #[error("line {line}: malformed OFF header: {msg}")]
    MalformedHeader { line: usize, msg: String },

    #[error("line {line}: vertex index {index} out of range (vertex count {count})")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        count: usize,
    },

    #[error("line {line}: face repeats a vertex index")]
    DegenerateFace { line: usize },

    /// Input ended early. `line` is 0 for binary streams; `msg` then carries
    /// byte offsets instead.
    #[error("line {line}: truncated input: {msg}")]
    TruncatedFile { line: usize, msg: String },

    #[error("line {line}: malformed line: {msg}")]
    MalformedLine { line: usize, msg: String },

    #[error("bad magic: not a BPK stream")]
    BadMagic,

    #[error("unsupported BPK version {0}")]
    UnsupportedVersion(u16),

    #[error("checksum mismatch: BPK stream is corrupt")]
    ChecksumMismatch,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
