use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// `Precondition` and `Degenerate` correspond to inputs that violate a
/// documented contract (CLI exit code 2); `SoundnessAlarm` flags a situation
/// that contradicts a theorem hypothesis and should never occur on valid
/// inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sampling budget exhausted after {trials} trials (acceptance ~ m^-k)")]
    SamplingBudget { trials: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("soundness alarm: {0}")]
    SoundnessAlarm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
