//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty signal")]
    EmptySignal,
    #[error("invalid filter spec: {0}")]
    InvalidFilterSpec(String),
    #[error("signal too short: need {needed} samples, got {got}")]
    SignalTooShort { needed: usize, got: usize },
    #[error("distortion gain must be positive, got {0}")]
    InvalidGain(f64),
    #[error("degenerate RIR: impulse response is all zeros")]
    DegenerateRir,
    #[error("sample-rate mismatch: clip at {clip_hz} Hz, RIR prepared at {rir_hz} Hz")]
    RateMismatch { clip_hz: u32, rir_hz: u32 },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("degenerate labels: training data contains a single class")]
    DegenerateLabels,
    #[error("selection size {k} out of range 1..={max}")]
    InvalidK { k: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label must be -1 or +1, got {0}")]
    InvalidLabel(i8),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("non-finite gradient")]
    NonFiniteGradient,
    #[error("not enough data: {have} examples for {silos} silos")]
    NotEnoughData { have: usize, silos: usize },
    #[error("RIR bank is empty")]
    MissingRir,
    #[error("cannot stratify split: {0}")]
    Stratify(String),
    #[error("metric undefined: no {0} examples present")]
    UndefinedMetric(&'static str),
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("invalid WAV file: {0}")]
    InvalidWav(String),
    #[error("no voiced segments detected")]
    NoVoiceDetected,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
