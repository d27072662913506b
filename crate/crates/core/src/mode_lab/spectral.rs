//! DFT-based operations on sampled modes: spectral moments, derivatives and exact shifts.
//!
//! The DFT kernel is `exp(-i nu u)` on the forward transform, so bin `k` carries the
//! component `exp(+i nu_k u)` with `nu_k = TimeGrid::angular_frequency(k)`. In that
//! representation a delay `u -> u - du` multiplies bin `k` by `exp(-i nu_k du)` and
//! `d/du` multiplies it by `i nu_k`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::sampled::SampledMode;
use crate::error::{Error, Result};

/// Largest tolerated energy fraction in the outermost 10% of the frequency window.
pub const LEAKAGE_LIMIT: f64 = 1e-6;

/// Shifts beyond this fraction of the grid window would wrap around.
pub const MAX_SHIFT_FRACTION: f64 = 0.1;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

fn inverse(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
}

/// Applies `multiplier(nu_k)` to every DFT bin and transforms back.
fn filter(mode: &SampledMode, multiplier: impl Fn(usize, f64) -> Complex64) -> SampledMode {
    let mut buf = mode.amplitude.clone();
    forward(&mut buf);
    for (k, x) in buf.iter_mut().enumerate() {
        *x *= multiplier(k, mode.grid.angular_frequency(k));
    }
    inverse(&mut buf);
    SampledMode {
        grid: mode.grid,
        amplitude: buf,
        label: mode.label.clone(),
    }
}

/// Normalized power per DFT bin, in FFT order.
pub fn power_spectrum(mode: &SampledMode) -> Vec<f64> {
    let mut buf = mode.amplitude.clone();
    forward(&mut buf);
    let mut power: Vec<f64> = buf.iter().map(|x| x.norm_sqr()).collect();
    let total: f64 = power.iter().sum();
    if total > 0.0 {
        power.iter_mut().for_each(|p| *p /= total);
    }
    power
}

/// First and second moments of `|g~[nu]|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralMoments {
    /// Mean angular frequency in the `exp(+i nu u)` representation.
    pub mean: f64,
    /// `sqrt(<nu^2>)`, measured from zero.
    pub rms_about_zero: f64,
    /// `sqrt(<nu^2> - <nu>^2)`.
    pub rms_about_mean: f64,
    /// Energy fraction in the outermost 10% of the window.
    pub leakage: f64,
}

pub fn spectral_moments(mode: &SampledMode) -> Result<SpectralMoments> {
    let power = power_spectrum(mode);
    let edge = 0.9 * mode.grid.nyquist();
    let (mut m1, mut m2, mut leakage) = (0.0, 0.0, 0.0);
    for (k, p) in power.iter().enumerate() {
        let nu = mode.grid.angular_frequency(k);
        m1 += nu * p;
        m2 += nu * nu * p;
        if nu.abs() >= edge {
            leakage += p;
        }
    }
    if leakage > LEAKAGE_LIMIT || !m2.is_finite() {
        return Err(Error::SpectralLeakage { fraction: leakage });
    }
    Ok(SpectralMoments {
        mean: m1,
        rms_about_zero: m2.sqrt(),
        rms_about_mean: (m2 - m1 * m1).max(0.0).sqrt(),
        leakage,
    })
}

/// Statistical frequency width of a carrier-free envelope, `sqrt(int dw/2pi w^2 |g~|^2)`.
///
/// The second moment is taken about `w = 0`; envelopes with a nonzero mean frequency
/// therefore include that offset (see [`spectral_moments`] for the centered value).
pub fn spectral_width(mode: &SampledMode) -> Result<f64> {
    spectral_moments(mode).map(|m| m.rms_about_zero)
}

/// Spectral derivative `d/du`. The Nyquist bin is dropped.
pub fn derivative(mode: &SampledMode) -> SampledMode {
    let nyquist = mode.grid.n_points / 2;
    filter(mode, |k, nu| {
        if k == nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, nu)
        }
    })
}

/// Exact delay `a(u) -> a(u - delta_u)` of the full sampled field, carrier included.
pub fn shift_mode(mode: &SampledMode, delta_u: f64) -> Result<SampledMode> {
    let bound = MAX_SHIFT_FRACTION * mode.grid.window();
    if !(delta_u.abs() < bound) {
        return Err(Error::ShiftOutOfRange { delta_u, bound });
    }
    if delta_u == 0.0 {
        return Ok(mode.clone());
    }
    Ok(filter(mode, |_, nu| Complex64::from_polar(1.0, -nu * delta_u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_lab::TimeGrid;

    fn gaussian(grid: TimeGrid, tau: f64, center: f64) -> SampledMode {
        SampledMode::from_fn(grid, "g", |u| {
            Complex64::new((-(u - center).powi(2) / (2.0 * tau * tau)).exp(), 0.0)
        })
        .normalized()
        .unwrap()
    }

    #[test]
    fn derivative_matches_analytic_gaussian_derivative() {
        let grid = TimeGrid::centered(40.0, 1024).unwrap();
        let g = gaussian(grid, 1.0, 0.0);
        let d = derivative(&g);
        let expect = g.map(|u, a| -u * a);
        assert!(d.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn shift_moves_peak_by_whole_samples_exactly() {
        let grid = TimeGrid::centered(40.0, 1024).unwrap();
        let g = gaussian(grid, 1.0, 0.0);
        let step = grid.t_step;
        let s = shift_mode(&g, 7.0 * step).unwrap();
        let expect = gaussian(grid, 1.0, 7.0 * step);
        assert!(s.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn shift_rejects_wraparound() {
        let grid = TimeGrid::centered(40.0, 1024).unwrap();
        let g = gaussian(grid, 1.0, 0.0);
        assert!(matches!(
            shift_mode(&g, 4.0),
            Err(Error::ShiftOutOfRange { .. })
        ));
        assert!(shift_mode(&g, -3.9).is_ok());
    }

    #[test]
    fn spike_spectrum_is_rejected_as_leaky() {
        let grid = TimeGrid::centered(1.0, 256).unwrap();
        let mut spike = SampledMode::from_fn(grid, "spike", |_| Complex64::new(0.0, 0.0));
        spike.amplitude[128] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            spectral_width(&spike),
            Err(Error::SpectralLeakage { .. })
        ));
    }

    #[test]
    fn centered_moment_removes_frequency_offset() {
        let grid = TimeGrid::centered(80.0, 4096).unwrap();
        let offset = 3.0;
        let g = gaussian(grid, 1.0, 0.0).map(|u, a| a * Complex64::from_polar(1.0, offset * u));
        let m = spectral_moments(&g).unwrap();
        assert!((m.mean - offset).abs() < 1e-10);
        let width = 1.0 / 2f64.sqrt();
        assert!((m.rms_about_mean - width).abs() < 1e-10);
        assert!((m.rms_about_zero - (width * width + offset * offset).sqrt()).abs() < 1e-10);
    }
}
