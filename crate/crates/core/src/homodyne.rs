//! Strong-LO balanced homodyne statistics and the resulting timing limits.
//!
//! The local oscillator is any unit-norm mode in `span{v0, v1}`, written
//! `lo = c0 v0 + c1 v1`. With the signal in `v0(u - du)` the mean difference signal is
//!
//! ```text
//! <D> = 2 s sqrt(N N_LO) Re[ e^{i(theta - theta_LO)} <lo|v0(. - du)> ]
//! ```
//!
//! and to first order `<lo|v0(. - du)> = conj(c0) + (du/u0) <lo|w1>`. For `lo = w1` this is
//! the familiar `(du/u0) cos + alpha/sqrt(alpha^2+1) sin` signal. Each LO component reads
//! the quadrature `X_n(theta_LO + arg c_n)` of the signal, weighted by `|c_n|^2`.
//! `s` is the detector scale `|E|^2`, which cancels from every observable ratio.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sci;
use crate::mode_lab::{ModeBasis, SampledMode, UNIT_NORM_TOLERANCE};
use crate::quantum_state::FieldState;

/// LO components outside `span{v0, v1}` above this norm are rejected.
pub const SPAN_TOLERANCE: f64 = 1e-6;

pub const SWEEP_CSV_HEADER: &str = "param,value,delta_u_min_seconds";

/// Named local-oscillator shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoShape {
    /// `w1`, the timing mode.
    Timing,
    /// `i v0`, pure phase (interferometric) readout.
    Phase,
    /// `v1`, pure envelope (time-of-flight) readout.
    Envelope,
    /// `cos(chi) i v0 + sin(chi) v1`.
    Mix(f64),
}

impl LoShape {
    pub fn sample(&self, basis: &ModeBasis) -> SampledMode {
        let i = Complex64::i();
        match *self {
            LoShape::Timing => basis.w1.clone().with_label("lo:w1"),
            LoShape::Phase => basis.v0.scaled(i).with_label("lo:iv0"),
            LoShape::Envelope => basis.v1.clone().with_label("lo:v1"),
            LoShape::Mix(chi) => basis
                .v0
                .scaled(i * chi.cos())
                .add_scaled(Complex64::new(chi.sin(), 0.0), &basis.v1)
                .with_label(format!("lo:mix:{chi}")),
        }
    }

    /// Mixing angle of `w1` in the `Mix` parameterization, `atan(1/alpha)`.
    pub fn timing_angle(basis: &ModeBasis) -> f64 {
        (1.0 / basis.alpha).atan()
    }
}

impl fmt::Display for LoShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoShape::Timing => f.write_str("w1"),
            LoShape::Phase => f.write_str("iv0"),
            LoShape::Envelope => f.write_str("v1"),
            LoShape::Mix(chi) => write!(f, "mix:{chi}"),
        }
    }
}

impl FromStr for LoShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "w1" => Ok(LoShape::Timing),
            "iv0" => Ok(LoShape::Phase),
            "v1" => Ok(LoShape::Envelope),
            other => match other.strip_prefix("mix:") {
                Some(angle) => angle
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|a| a.is_finite())
                    .map(LoShape::Mix)
                    .ok_or_else(|| format!("bad mixing angle in `{other}`")),
                None => Err(format!(
                    "unknown LO mode `{other}` (expected w1, iv0, v1 or mix:<angle_rad>)"
                )),
            },
        }
    }
}

/// Local-oscillator configuration, decomposed on the basis it was built from.
#[derive(Debug, Clone)]
pub struct HomodyneConfig {
    basis: Arc<ModeBasis>,
    pub lo_mode: SampledMode,
    pub theta_lo: f64,
    pub n_lo: f64,
    pub strong_lo: bool,
    /// `|E|^2`, the detector-unit scale.
    pub detector_scale: f64,
    c0: Complex64,
    c1: Complex64,
}

impl HomodyneConfig {
    pub fn new(
        basis: Arc<ModeBasis>,
        lo_mode: SampledMode,
        theta_lo: f64,
        n_lo: f64,
        strong_lo: bool,
    ) -> Result<Self> {
        if lo_mode.grid != *basis.grid() {
            return Err(Error::BasisMismatch);
        }
        lo_mode.check_unit_norm(UNIT_NORM_TOLERANCE)?;
        if !(n_lo.is_finite() && n_lo > 0.0) {
            return Err(Error::param("n_lo", format!("must be finite and > 0, got {n_lo}")));
        }
        if !theta_lo.is_finite() {
            return Err(Error::param("theta_lo", "must be finite"));
        }
        let c0 = basis.v0.inner(&lo_mode);
        let c1 = basis.v1.inner(&lo_mode);
        let inside = basis.v0.scaled(c0).add_scaled(c1, &basis.v1);
        let outside = lo_mode.distance(&inside);
        if outside > SPAN_TOLERANCE {
            return Err(Error::LoOutsideSpan { outside });
        }
        Ok(Self {
            basis,
            lo_mode,
            theta_lo,
            n_lo,
            strong_lo,
            detector_scale: 1.0,
            c0,
            c1,
        })
    }

    /// Strong LO of the given shape.
    pub fn from_shape(basis: Arc<ModeBasis>, shape: LoShape, theta_lo: f64, n_lo: f64) -> Result<Self> {
        let lo = shape.sample(&basis);
        Self::new(basis, lo, theta_lo, n_lo, true)
    }

    pub fn with_detector_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param("detector_scale", "must be finite and > 0"));
        }
        self.detector_scale = scale;
        Ok(self)
    }

    pub fn basis(&self) -> &Arc<ModeBasis> {
        &self.basis
    }

    /// `(<v0|lo>, <v1|lo>)`.
    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.c0, self.c1)
    }

    /// `<lo|w1>`; its real part sets the timing slope at `theta = theta_LO`.
    pub fn timing_overlap(&self) -> Complex64 {
        let b = &self.basis;
        let norm = 1.0 / b.alpha.hypot(1.0);
        (self.c0.conj() * Complex64::new(0.0, b.alpha) + self.c1.conj()) * norm
    }

    /// Mixing angle `atan2(|c1|, |c0|)` of the LO between `v0` and `v1`.
    pub fn mixing_angle(&self) -> f64 {
        self.c1.norm().atan2(self.c0.norm())
    }

    fn amplitude(&self, signal: &FieldState) -> f64 {
        2.0 * self.detector_scale * (signal.photon_number * self.n_lo).sqrt()
    }

    fn check(&self, signal: &FieldState) -> Result<()> {
        let same = Arc::ptr_eq(&self.basis, &signal.basis)
            || (self.basis.spec == signal.basis.spec && self.basis.grid() == signal.basis.grid());
        if same {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    fn require_strong(&self) -> Result<()> {
        if self.strong_lo {
            Ok(())
        } else {
            Err(Error::WeakLo)
        }
    }
}

/// Mean, variance and SNR of the homodyne difference signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomodyneStats {
    pub mean: f64,
    pub variance: f64,
    pub snr: f64,
}

/// First-order mean signal for a delay `delta_u`.
pub fn mean_signal(signal: &FieldState, cfg: &HomodyneConfig, delta_u: f64) -> Result<f64> {
    cfg.check(signal)?;
    let phase = Complex64::from_polar(1.0, signal.theta - cfg.theta_lo);
    let projection = cfg.c0.conj() + cfg.timing_overlap() * (delta_u / signal.basis.u0);
    Ok(cfg.amplitude(signal) * (phase * projection).re)
}

/// Mean signal from the exact grid overlap `<lo|v0(. - du)>`, without linearization.
pub fn mean_signal_overlap(signal: &FieldState, cfg: &HomodyneConfig, delta_u: f64) -> Result<f64> {
    cfg.check(signal)?;
    let shifted = signal.basis.shifted_v0(delta_u)?;
    let phase = Complex64::from_polar(1.0, signal.theta - cfg.theta_lo);
    Ok(cfg.amplitude(signal) * (phase * cfg.lo_mode.inner(&shifted)).re)
}

/// Strong-LO variance of the difference signal.
pub fn variance_signal(signal: &FieldState, cfg: &HomodyneConfig) -> Result<f64> {
    cfg.check(signal)?;
    cfg.require_strong()?;
    let read = |c: Complex64, mode: &crate::quantum_state::QuadratureState| {
        if c.norm_sqr() == 0.0 {
            return 0.0;
        }
        let angle = cfg.theta_lo + c.arg() - signal.reference_phase;
        c.norm_sqr() * mode.variance_along(angle)
    };
    let weighted = read(cfg.c0, &signal.v0) + read(cfg.c1, &signal.v1);
    Ok(cfg.detector_scale.powi(2) * cfg.n_lo * weighted)
}

/// `d<D>/d(du)` at the signal's phase.
pub fn timing_slope(signal: &FieldState, cfg: &HomodyneConfig) -> Result<f64> {
    cfg.check(signal)?;
    let phase = Complex64::from_polar(1.0, signal.theta - cfg.theta_lo);
    Ok(cfg.amplitude(signal) * (phase * cfg.timing_overlap()).re / signal.basis.u0)
}

/// Delay giving unit SNR at the optimal phase `theta = theta_LO`.
///
/// Reduces to `(u0 / 2 sqrt(N)) sqrt((alpha^2 var(P0) + var(Q1)) / (1 + alpha^2))` for
/// `lo = w1`. Infinite when the LO has no timing overlap.
pub fn min_resolvable_delay(signal: &FieldState, cfg: &HomodyneConfig) -> Result<f64> {
    let variance = variance_signal(signal, cfg)?;
    let slope = cfg.amplitude(signal) * cfg.timing_overlap().re / signal.basis.u0;
    Ok(variance.sqrt() / slope.abs())
}

/// Background-subtracted SNR `|<D>(du) - <D>(0)| / sigma_D`.
pub fn snr_at(signal: &FieldState, cfg: &HomodyneConfig, delta_u: f64) -> Result<f64> {
    let variance = variance_signal(signal, cfg)?;
    let change = mean_signal(signal, cfg, delta_u)? - mean_signal(signal, cfg, 0.0)?;
    Ok(change.abs() / variance.sqrt())
}

pub fn stats(signal: &FieldState, cfg: &HomodyneConfig, delta_u: f64) -> Result<HomodyneStats> {
    let mean = mean_signal(signal, cfg, delta_u)?;
    let variance = variance_signal(signal, cfg)?;
    Ok(HomodyneStats {
        mean,
        variance,
        snr: mean.abs() / variance.sqrt(),
    })
}

/// Time-of-flight limit `1 / (2 delta_omega sqrt(N))`.
pub fn sql_tof(photon_number: f64, delta_omega: f64) -> f64 {
    1.0 / (2.0 * delta_omega * photon_number.sqrt())
}

/// Phase limit `1 / (2 omega0 sqrt(N))`.
pub fn sql_phase(photon_number: f64, omega0: f64) -> f64 {
    1.0 / (2.0 * omega0 * photon_number.sqrt())
}

/// Combined carrier + envelope limit `1 / (2 sqrt(N) sqrt(omega0^2 + delta_omega^2))`.
pub fn sql_combined(photon_number: f64, omega0: f64, delta_omega: f64) -> f64 {
    1.0 / (2.0 * photon_number.sqrt() * omega0.hypot(delta_omega))
}

/// Combined limit with both `P0` and `Q1` squeezed by `r`.
pub fn sql_squeezed(photon_number: f64, omega0: f64, delta_omega: f64, r: f64) -> f64 {
    sql_combined(photon_number, omega0, delta_omega) * (-r).exp()
}

/// One row of a 1-D parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub delta_u_min_seconds: f64,
}

/// Evaluates `delay(value)` for every value in parallel, keeping input order.
pub fn sweep<F>(param: &str, values: &[f64], delay: F) -> Result<Vec<SweepRow>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    values
        .par_iter()
        .map(|&value| {
            Ok(SweepRow {
                param: param.to_owned(),
                value,
                delta_u_min_seconds: delay(value)?,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            row.param,
            sci(row.value),
            sci(row.delta_u_min_seconds)
        )?;
    }
    Ok(())
}
