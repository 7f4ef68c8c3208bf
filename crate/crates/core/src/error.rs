//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state norm squared is {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },
    #[error("matrix is not Hermitian (max deviation {max_dev:e})")]
    NotHermitian { max_dev: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix has negative eigenvalue {value:e}")]
    NotPositive { value: f64 },
    #[error("unknown basis label {label:?}, expected four characters from {{H, V}}")]
    BadBasisLabel { label: String },
    #[error("unparsable setting string {input:?}, expected four characters from {{X, Y, A, B}}")]
    BadSettingString { input: String },
    #[error("noise weights ({p_coh}, {p_diag}, {p_white}) must be non-negative and sum to 1")]
    BadNoiseWeights { p_coh: f64, p_diag: f64, p_white: f64 },
    #[error("temporal overlap {overlap} outside [0, 1]")]
    BadOverlap { overlap: f64 },
    #[error("post-selection left no amplitude")]
    EmptyPostSelection,
    #[error("operation is only defined for the {expected} setting, got {got}")]
    WrongSetting { expected: String, got: String },
    #[error("no counts recorded")]
    NoCounts,
    #[error("count records are missing setting {setting}")]
    MissingSetting { setting: String },
    #[error("duplicate count record for setting {setting}")]
    DuplicateSetting { setting: String },
    #[error("invalid run configuration: {reason}")]
    InvalidRunConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
