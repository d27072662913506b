//! Moment-level Gaussian description of the signal field in the two tracked modes.
//!
//! Quadratures are `X(phi) = a^dagger e^{i phi} + a e^{-i phi}`, so vacuum and coherent
//! states have unit variance and a coherent amplitude `sqrt(N) e^{i theta}` has
//! `<X(phi)> = 2 sqrt(N) cos(theta - phi)`. `Q = X(ref)` and `P = X(ref + pi/2)` where
//! `ref` is the state's reference phase, normally the local-oscillator phase.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::mode_lab::ModeBasis;

/// Mean photon number `P T / (hbar omega0)` collected in a detection window.
pub fn photons_from_power(power_w: f64, detection_time_s: f64, omega0: f64) -> Result<f64> {
    for (name, v) in [
        ("power", power_w),
        ("detection_time", detection_time_s),
        ("omega0", omega0),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
        }
    }
    Ok(power_w * detection_time_s / (HBAR * omega0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Q,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeLabel {
    V0,
    V1,
}

/// Means and variances of `Q` and `P` for one mode. No `Q`-`P` correlation is tracked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureState {
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
}

impl QuadratureState {
    pub const VACUUM: Self = Self {
        mean_q: 0.0,
        mean_p: 0.0,
        var_q: 1.0,
        var_p: 1.0,
    };

    pub fn uncertainty_product(&self) -> f64 {
        self.var_q * self.var_p
    }

    /// Variance of `X(ref + angle)`.
    pub fn variance_along(&self, angle: f64) -> f64 {
        let (s, c) = angle.sin_cos();
        self.var_q * c * c + self.var_p * s * s
    }

    pub fn mean_along(&self, angle: f64) -> f64 {
        let (s, c) = angle.sin_cos();
        self.mean_q * c + self.mean_p * s
    }

    pub fn is_isotropic(&self) -> bool {
        self.var_q == self.var_p
    }

    /// Scales the chosen quadrature variance by `e^{-2r}` and its conjugate by `e^{2r}`.
    pub fn squeezed(mut self, quadrature: Quadrature, r: f64) -> Self {
        let down = (-2.0 * r).exp();
        let up = (2.0 * r).exp();
        match quadrature {
            Quadrature::Q => {
                self.var_q *= down;
                self.var_p *= up;
            }
            Quadrature::P => {
                self.var_p *= down;
                self.var_q *= up;
            }
        }
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.var_q > 0.0 && self.var_p > 0.0) {
            return Err(Error::param("variance", "quadrature variances must be > 0"));
        }
        if self.uncertainty_product() < 1.0 - 1e-12 {
            return Err(Error::param(
                "variance",
                format!(
                    "uncertainty product {} violates var_q var_p >= 1",
                    self.uncertainty_product()
                ),
            ));
        }
        Ok(())
    }
}

/// One row of the state dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub mode: ModeLabel,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
}

/// Gaussian state of the signal field: coherent amplitude in `v0`, `v1` displaced-free.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub basis: Arc<ModeBasis>,
    pub v0: QuadratureState,
    pub v1: QuadratureState,
    pub photon_number: f64,
    pub theta: f64,
    /// Phase that `Q` is referenced to.
    pub reference_phase: f64,
}

/// Coherent pulse with `N` photons in `v0` and phase `theta`, quadratures referenced to 0.
pub fn coherent_state(basis: Arc<ModeBasis>, photon_number: f64, theta: f64) -> Result<FieldState> {
    if !(photon_number.is_finite() && photon_number > 0.0) {
        return Err(Error::param(
            "photon_number",
            format!("must be finite and > 0, got {photon_number}"),
        ));
    }
    if !theta.is_finite() {
        return Err(Error::param("theta", "must be finite"));
    }
    let amp = 2.0 * photon_number.sqrt();
    Ok(FieldState {
        basis,
        v0: QuadratureState {
            mean_q: amp * theta.cos(),
            mean_p: amp * theta.sin(),
            ..QuadratureState::VACUUM
        },
        v1: QuadratureState::VACUUM,
        photon_number,
        theta,
        reference_phase: 0.0,
    })
}

impl FieldState {
    pub fn mode(&self, label: ModeLabel) -> &QuadratureState {
        match label {
            ModeLabel::V0 => &self.v0,
            ModeLabel::V1 => &self.v1,
        }
    }

    /// Variance of `P0`, the phase quadrature of `v0`.
    pub fn phase_variance_v0(&self) -> f64 {
        self.v0.var_p
    }

    /// Variance of `Q1`, the amplitude quadrature of `v1`.
    pub fn amplitude_variance_v1(&self) -> f64 {
        self.v1.var_q
    }

    /// Re-expresses the quadratures relative to `phase`, typically the LO phase.
    ///
    /// Only isotropic (unsqueezed) modes can be rotated without tracking correlations.
    pub fn with_reference_phase(mut self, phase: f64) -> Result<Self> {
        let delta = phase - self.reference_phase;
        if delta == 0.0 {
            return Ok(self);
        }
        if !(self.v0.is_isotropic() && self.v1.is_isotropic()) {
            return Err(Error::AnisotropicRereference);
        }
        for mode in [&mut self.v0, &mut self.v1] {
            let (q, p) = (mode.mean_along(delta), mode.mean_along(delta + std::f64::consts::FRAC_PI_2));
            mode.mean_q = q;
            mode.mean_p = p;
        }
        self.reference_phase = phase;
        Ok(self)
    }

    pub fn records(&self) -> [StateRecord; 2] {
        let rec = |mode, s: &QuadratureState| StateRecord {
            mode,
            mean_q: s.mean_q,
            mean_p: s.mean_p,
            var_q: s.var_q,
            var_p: s.var_p,
        };
        [rec(ModeLabel::V0, &self.v0), rec(ModeLabel::V1, &self.v1)]
    }

    /// Photon number implied by the `v0` mean quadratures.
    pub fn photon_number_from_means(&self) -> f64 {
        (self.v0.mean_q.powi(2) + self.v0.mean_p.powi(2)) / 4.0
    }

    pub fn validate(&self) -> Result<()> {
        self.v0.check()?;
        self.v1.check()?;
        if self.v1.mean_q != 0.0 || self.v1.mean_p != 0.0 {
            return Err(Error::param("v1", "coherent amplitude must live entirely in v0"));
        }
        Ok(())
    }
}

/// Squeezing parameters, declared relative to the state's reference (LO) phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SqueezingSpec {
    /// Applied to `P0`, the phase quadrature of `v0`.
    pub r_phase_v0: f64,
    /// Applied to `Q1`, the amplitude quadrature of `v1`.
    pub r_amp_v1: f64,
}

impl SqueezingSpec {
    pub fn new(r_phase_v0: f64, r_amp_v1: f64) -> Result<Self> {
        for (name, r) in [("r_phase_v0", r_phase_v0), ("r_amp_v1", r_amp_v1)] {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::param(name, format!("must be finite and >= 0, got {r}")));
            }
        }
        Ok(Self {
            r_phase_v0,
            r_amp_v1,
        })
    }

    pub fn equal(r: f64) -> Result<Self> {
        Self::new(r, r)
    }

    /// Squeezing parameter for a variance reduction of `db` decibels: `e^{-2r} = 10^{-db/10}`.
    pub fn r_from_db(db: f64) -> f64 {
        db * std::f64::consts::LN_10 / 20.0
    }

    pub fn is_coherent(&self) -> bool {
        self.r_phase_v0 == 0.0 && self.r_amp_v1 == 0.0
    }
}

/// Squeezes `P0` by `r_phase_v0` and `Q1` by `r_amp_v1`; means are unchanged.
pub fn apply_squeezing(state: &FieldState, spec: &SqueezingSpec) -> FieldState {
    FieldState {
        v0: state.v0.squeezed(Quadrature::P, spec.r_phase_v0),
        v1: state.v1.squeezed(Quadrature::Q, spec.r_amp_v1),
        ..state.clone()
    }
}

/// Formal inverse of [`apply_squeezing`]: squeezes the conjugate quadratures instead.
pub fn apply_antisqueezing(state: &FieldState, spec: &SqueezingSpec) -> FieldState {
    FieldState {
        v0: state.v0.squeezed(Quadrature::Q, spec.r_phase_v0),
        v1: state.v1.squeezed(Quadrature::P, spec.r_amp_v1),
        ..state.clone()
    }
}
