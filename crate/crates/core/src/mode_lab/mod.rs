//! Sampled temporal modes of a pulse: envelopes, spectral width, the derivative mode
//! `v1`, the timing mode `w1` and the first-order decomposition of a delayed pulse.
//!
//! The carrier is kept explicitly in every field mode (`v_n = g_n e^{-i omega0 u}`), so
//! delays are exact phase ramps in the frequency domain and the phase component of the
//! timing mode appears without any rotating-frame bookkeeping.

mod basis;
mod grid;
mod pulse;
mod sampled;
mod spectral;

pub use basis::{build_basis, make_envelope, ModeBasis, FIRST_ORDER_SHIFT_FRACTION};
pub use grid::{
    make_grid, validate_grid, TimeGrid, DEFAULT_GUARD_FACTOR, DEFAULT_POINTS, MIN_GUARD_FACTOR,
};
pub use pulse::{Envelope, PulseSpec};
pub use sampled::{SampledMode, MODE_CSV_HEADER, UNIT_NORM_TOLERANCE};
pub use spectral::{
    derivative, power_spectrum, shift_mode, spectral_moments, spectral_width, SpectralMoments,
    LEAKAGE_LIMIT, MAX_SHIFT_FRACTION,
};
