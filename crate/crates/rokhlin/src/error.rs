use thiserror::Error;

/// Errors produced by fallible library operations.
///
/// Contract violations that indicate programmer error (dimension mismatches
/// in pure arithmetic, boundary of an arity-0 chain) panic instead; the
/// variants here cover conditions driven by user-supplied data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis is rank-deficient: expected rank {expected}, got {actual}")]
    RankDeficientBasis { expected: usize, actual: usize },

    #[error("basis columns must live in dimension {ambient}, got {actual}")]
    BasisDimensionMismatch { ambient: usize, actual: usize },

    #[error("tuple label {label} is outside the cover index set 0..{cover_size}")]
    LabelOutsideCover { label: usize, cover_size: usize },

    #[error("tower index ({i}, {j}) is invalid for this partition")]
    InvalidTowerIndex { i: usize, j: usize },

    #[error("tower verification failed: {0}")]
    TowerVerification(String),

    #[error("tuple violates the colouring condition (no witness pair): {tuple}")]
    ColouringViolation { tuple: String },

    #[error("dimension {dim} is outside the supported range {min}..={max}")]
    DimOutOfRange { dim: usize, min: usize, max: usize },

    #[error("pipeline config has no levels")]
    NoLevels,

    #[error("pipeline levels must be strictly increasing, got {0:?}")]
    LevelsNotIncreasing(Vec<u64>),

    #[error("invalid rational literal {0:?} (expected \"p/q\" or \"p\")")]
    BadRational(String),

    #[error("invalid {what}: {detail}")]
    BadInput { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
