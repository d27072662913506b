use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homodyne::{timing_slope, variance_signal, HomodyneConfig, LoShape};
use crate::quantum_state::FieldState;

pub const MIN_SCAN_ANGLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoDescription {
    /// `chi` in `cos(chi) i v0 + sin(chi) v1`, i.e. `atan2(|<v1|lo>|, |<v0|lo>|)`.
    pub mixing_angle: f64,
    /// LO phase `theta_LO`, rad.
    pub phase: f64,
}

/// Fisher information of one homodyne outcome about the delay, and its Cramer-Rao bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherResult {
    /// 1/s^2
    pub fisher_info: f64,
    /// `1 / sqrt(fisher_info)`, s
    pub crb: f64,
    pub lo: LoDescription,
}

impl FisherResult {
    fn new(fisher_info: f64, lo: LoDescription) -> Self {
        Self {
            fisher_info,
            crb: 1.0 / fisher_info.sqrt(),
            lo,
        }
    }
}

/// `F = (d<D>/d du)^2 / sigma_D^2` for the Gaussian outcome law with delay-independent variance.
///
/// In the linearized strong-LO model the information does not depend on `delta_u`; the
/// argument is validated and kept for interface symmetry with the other per-delay queries.
pub fn fisher_info(signal: &FieldState, cfg: &HomodyneConfig, delta_u: f64) -> Result<FisherResult> {
    if !delta_u.is_finite() {
        return Err(Error::param("delta_u", "must be finite"));
    }
    let variance = variance_signal(signal, cfg)?;
    let slope = timing_slope(signal, cfg)?;
    Ok(FisherResult::new(
        slope * slope / variance,
        LoDescription {
            mixing_angle: cfg.mixing_angle(),
            phase: cfg.theta_lo,
        },
    ))
}

/// Evenly spaced angles over `[start, stop]`, endpoints included.
pub fn scan_angles(start: f64, stop: f64, n_angles: usize) -> Vec<f64> {
    let step = (stop - start) / (n_angles - 1) as f64;
    (0..n_angles).map(|k| start + k as f64 * step).collect()
}

/// Fisher information for `lo(chi) = cos(chi) i v0 + sin(chi) v1` at each angle, with
/// `theta_LO = theta`.
pub fn lo_scan(signal: &FieldState, angles: &[f64]) -> Result<Vec<FisherResult>> {
    angles
        .par_iter()
        .map(|&chi| {
            let cfg = HomodyneConfig::from_shape(
                signal.basis.clone(),
                LoShape::Mix(chi),
                signal.theta,
                1.0,
            )?;
            let mut result = fisher_info(signal, &cfg, 0.0)?;
            result.lo.mixing_angle = chi;
            Ok(result)
        })
        .collect()
}

/// Scans `n_angles` LO mixing angles over `[0, pi/2]`.
pub fn lo_optimality_scan(signal: &FieldState, n_angles: usize) -> Result<Vec<FisherResult>> {
    if n_angles < MIN_SCAN_ANGLES {
        return Err(Error::param(
            "n_angles",
            format!("need at least {MIN_SCAN_ANGLES} angles, got {n_angles}"),
        ));
    }
    lo_scan(signal, &scan_angles(0.0, FRAC_PI_2, n_angles))
}

/// Index of the largest Fisher information (first one on ties).
pub fn argmax(scan: &[FisherResult]) -> Option<usize> {
    scan.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, r)| match best {
            Some((_, f)) if f >= r.fisher_info => best,
            _ => Some((i, r.fisher_info)),
        })
        .map(|(i, _)| i)
}

/// True when the scan rises to a single peak and then falls (plateaus allowed).
pub fn is_unimodal(scan: &[FisherResult]) -> bool {
    let Some(peak) = argmax(scan) else {
        return true;
    };
    scan[..=peak]
        .windows(2)
        .all(|w| w[1].fisher_info >= w[0].fisher_info)
        && scan[peak..]
            .windows(2)
            .all(|w| w[1].fisher_info <= w[0].fisher_info)
}
