use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("completeness check requires rank ≤ 3")]
    RankUnsupported,
    #[error("fan is not complete")]
    NotComplete,
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("non-full-dimensional maximal cone {0}")]
    NotFullDimensional(usize),
    #[error("point {point:?} is not in cone {cone}")]
    OutsideCone { cone: usize, point: Vec<String> },
    #[error("point {0:?} is outside the fan support")]
    OutsideSupport(Vec<String>),
    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),
    #[error("splitting certificate fails: {0}")]
    CertificateFailure(String),
    #[error("cone compatibility failure: {0}")]
    ConeCompatibility(String),
    #[error("fan mismatch")]
    FanMismatch,
    #[error("cache corruption at line {line}: {reason}")]
    CacheCorrupt { line: usize, reason: String },
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
