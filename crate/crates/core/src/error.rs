use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building modes, states or reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("carrier undersampled: t_step {t_step:e} s must be below pi/omega0 = {limit:e} s")]
    CarrierUndersampled { t_step: f64, limit: f64 },

    #[error("spectral leakage: {fraction:e} of the energy lies in the outer 10% of the frequency window")]
    SpectralLeakage { fraction: f64 },

    #[error("shift {delta_u:e} s exceeds the allowed bound {bound:e} s")]
    ShiftOutOfRange { delta_u: f64, bound: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("local oscillator has norm {outside:e} outside span{{v0, v1}}")]
    LoOutsideSpan { outside: f64 },

    #[error("mode norm {norm} differs from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("state and homodyne configuration were built on different mode bases")]
    BasisMismatch,

    #[error("weak local oscillator regime is not supported; set strong_lo")]
    WeakLo,

    #[error("estimator is singular: timing slope factor {factor:e} is below 1e-6")]
    SingularEstimator { factor: f64 },

    #[error("cannot re-reference an anisotropic quadrature state; re-reference before squeezing")]
    AnisotropicRereference,

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("noise input error at line {line}: {message}")]
    NoiseInput { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::CarrierUndersampled { .. } => "carrier_undersampled",
            Error::SpectralLeakage { .. } => "spectral_leakage",
            Error::ShiftOutOfRange { .. } => "shift_out_of_range",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::LoOutsideSpan { .. } => "lo_outside_span",
            Error::NotNormalized { .. } => "not_normalized",
            Error::BasisMismatch => "basis_mismatch",
            Error::WeakLo => "weak_lo",
            Error::SingularEstimator { .. } => "singular_estimator",
            Error::AnisotropicRereference => "anisotropic_rereference",
            Error::Config { .. } => "config",
            Error::NoiseInput { .. } => "noise_input",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
