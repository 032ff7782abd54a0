use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no preferred phase-locking angle (resultant length {resultant:.4})")]
    NoPreferredAngle { resultant: f64 },

    #[error("no overall phase locking (gamma {gamma:.4} <= threshold {threshold:.4}); rates not computed")]
    NoLocking { gamma: f64, threshold: f64 },

    #[error("phase undefined at sample {index}")]
    UndefinedPhase { index: usize },

    #[error("integration diverged at step {step}")]
    Divergence { step: usize },

    #[error("integration failed at step {step}: {reason}")]
    IntegrationFailure { step: usize, reason: String },

    #[error("undefined rate: {0}")]
    UndefinedRate(String),

    #[error("internal consistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of the numerics (divergence, gating blow-up)
    /// rather than bad input or missing synchrony.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Divergence { .. } | Error::IntegrationFailure { .. } | Error::NonFinite(_))
    }
}
