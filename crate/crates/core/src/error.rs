use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group `{group_id}` has no members")]
    EmptyGroup { group_id: String },

    #[error("group `{group_id}` is degenerate: every member has h-index 0")]
    DegenerateGroup { group_id: String },

    #[error("sample size {sample_size} exceeds group size {group_size}")]
    SampleTooLarge { sample_size: usize, group_size: usize },

    #[error("at least {required} groups are required, got {got}")]
    TooFewGroups { required: usize, got: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sample has zero variance")]
    ZeroVariance,

    #[error("sample size {n} outside the supported range [{min}, {max}]")]
    SampleSizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("result overflows at x = {x}")]
    Overflow { x: f64 },

    #[error("fit diverged: {0}")]
    FitDiverged(String),

    #[error("bad bin specification: {0}")]
    BadBinSpec(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
