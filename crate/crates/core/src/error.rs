use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("channel {n} outside [{lo}, {hi}]")]
    ChannelRange { n: i64, lo: i64, hi: i64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("scale factor {scale} does not map J={j}, T={t} onto integers")]
    IncompatibleScale { scale: f64, j: i64, t: i64 },

    #[error("degenerate system: n = {0} channels (need at least 2)")]
    Degenerate(usize),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("quantum and classical runs disagree on `{0}`")]
    Inconsistent(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("non-positive effective Planck constant ({0})")]
    Domain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
