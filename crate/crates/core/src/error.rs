//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Enumeration passed the configured element cap. This signals a
    /// desk-scale limit, not a mathematical failure.
    #[error("budget exceeded: {context} needs more than {cap} elements")]
    BudgetExceeded { context: &'static str, cap: usize },

    #[error("unknown registry key `{0}`")]
    UnknownKey(String),

    #[error("malformed registry key `{key}`: {reason}")]
    BadKey { key: String, reason: String },

    #[error("elements belong to different models (`{0}` vs `{1}`)")]
    ModelMismatch(String, String),

    #[error("word `{word}` is not valid for this model: {reason}")]
    BadWord { word: String, reason: String },

    #[error("zero witness function")]
    ZeroWitness,

    #[error("element is not generated by the marked generating set")]
    NotGenerated,

    #[error("parabolic generator sets must be pairwise disjoint")]
    OverlappingParabolics,

    #[error("parabolic family is degenerate: {0}")]
    DegenerateFamily(String),

    #[error("operation requires a parabolic family but the model declares none")]
    NoParabolics,

    #[error("subgroup membership is not decidable for this model/sublist combination")]
    UnsupportedParabolic,

    #[error("input is not CAT(0)-consistent: {0}")]
    NotCat0(String),

    #[error("complex file is malformed: {0}")]
    BadComplexFile(String),

    #[error("finite group table is malformed: {0}")]
    BadTable(String),

    #[error("stabilizer sizes must lie in 1..={bound}, found {found}")]
    StabilizerBound { bound: u32, found: u32 },

    #[error("calibration failed: {0}")]
    CalibrationFailed(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
