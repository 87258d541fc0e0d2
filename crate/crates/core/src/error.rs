use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arguments must be finite and strictly positive, got ({0}, {1})")]
    NonPositivePair(f64, f64),

    #[error("gap coordinate must lie in [0, 1), got {0}")]
    GapOutOfRange(f64),

    #[error("point must lie in the open interval (0, 1), got {0}")]
    PointOutOfRange(f64),

    #[error("t must lie in [0, 1/2], got {0}")]
    WeightOutOfRange(f64),

    #[error("s must be a finite real >= 1, got {0}")]
    ExponentOutOfRange(f64),

    #[error("u must lie in [0, 1], got {0}")]
    SquaredWeightOutOfRange(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("no critical point: {0}")]
    NoCriticalPoint(String),

    #[error("root bracket could not be established: {0}")]
    Bracket(String),

    #[error(
        "t = {t} is not outside the sharp interval for the {side} side (threshold {threshold})"
    )]
    NotOutsideSharpInterval {
        t: f64,
        side: String,
        threshold: f64,
    },

    #[error("no witness found: {0}")]
    WitnessNotFound(String),

    #[error("non-finite margin {margin} at x = {x} for `{check}`")]
    NonFiniteMargin { check: String, x: f64, margin: f64 },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
