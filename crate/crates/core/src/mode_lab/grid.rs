use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::pulse::PulseSpec;
use crate::error::{Error, Result};

pub const MIN_GUARD_FACTOR: f64 = 20.0;
pub const DEFAULT_GUARD_FACTOR: f64 = 40.0;
pub const DEFAULT_POINTS: usize = 1 << 16;

/// Uniform sampling of the light cone variable `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_step: f64,
    pub n_points: usize,
}

impl TimeGrid {
    /// Grid of `n_points` samples centered on `u = 0` spanning `window` seconds.
    ///
    /// Sample `n_points / 2` sits exactly on `u = 0`, so samples `n/2 + j` and
    /// `n/2 - j` are mirror images.
    pub fn centered(window: f64, n_points: usize) -> Result<Self> {
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 16, got {n_points}"
            )));
        }
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidGrid(format!("window must be > 0, got {window}")));
        }
        let t_step = window / n_points as f64;
        Ok(Self {
            t_start: -((n_points / 2) as f64) * t_step,
            t_step,
            n_points,
        })
    }

    pub fn window(&self) -> f64 {
        self.t_step * self.n_points as f64
    }

    /// Sample time, computed as `(index - n/2) t_step` so mirrored samples are exact negatives.
    pub fn time(&self, index: usize) -> f64 {
        (index as i64 - (self.n_points / 2) as i64) as f64 * self.t_step
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.time(k))
    }

    pub fn center_index(&self) -> usize {
        self.n_points / 2
    }

    /// Angular frequency of DFT bin `k` for the kernel `exp(+i nu u)`.
    ///
    /// Bins follow the usual FFT ordering; the Nyquist bin maps to `-pi / t_step`.
    /// The optical frequency of the `exp(-i omega u)` field convention is `omega = -nu`.
    pub fn angular_frequency(&self, k: usize) -> f64 {
        let n = self.n_points as i64;
        let signed = if (k as i64) < n / 2 { k as i64 } else { k as i64 - n };
        2.0 * PI * signed as f64 / self.window()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.t_step
    }

    /// Same window, twice the sampling density.
    pub fn refined(&self) -> Self {
        Self::centered(self.window(), self.n_points * 2).expect("refining a valid grid")
    }
}

/// Builds the default analysis grid for a pulse: `guard_factor * fwhm` wide, centered on 0.
pub fn make_grid(spec: &PulseSpec, guard_factor: f64, n_points: usize) -> Result<TimeGrid> {
    if !(guard_factor >= MIN_GUARD_FACTOR) {
        return Err(Error::InvalidGrid(format!(
            "guard_factor must be >= {MIN_GUARD_FACTOR}, got {guard_factor}"
        )));
    }
    let grid = TimeGrid::centered(guard_factor * spec.duration_fwhm, n_points)?;
    validate_grid(spec, &grid)?;
    Ok(grid)
}

/// Checks that `grid` resolves the carrier of `spec` and holds enough envelope widths.
pub fn validate_grid(spec: &PulseSpec, grid: &TimeGrid) -> Result<()> {
    let limit = PI / spec.omega0;
    if !(grid.t_step < limit) {
        return Err(Error::CarrierUndersampled {
            t_step: grid.t_step,
            limit,
        });
    }
    // Small slack so grids built from exactly guard = 20 pass despite rounding.
    if grid.window() < MIN_GUARD_FACTOR * spec.duration_fwhm * (1.0 - 1e-12) {
        return Err(Error::InvalidGrid(format!(
            "window {:e} s is shorter than {MIN_GUARD_FACTOR} pulse durations",
            grid.window()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_lab::Envelope;

    fn spec() -> PulseSpec {
        PulseSpec::reference()
    }

    #[test]
    fn default_grid_spans_400_fs() {
        let grid = make_grid(&spec(), 40.0, 1 << 16).unwrap();
        assert_eq!(grid.n_points, 65_536);
        assert!((grid.window() - 400e-15).abs() < 1e-27);
        assert_eq!(grid.time(grid.center_index()), 0.0);
        assert!((grid.time(0) + 200e-15).abs() < 1e-27);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            make_grid(&spec(), 40.0, 100),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(make_grid(&spec(), 40.0, 8), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn rejects_small_guard() {
        assert!(make_grid(&spec(), 19.0, 1 << 16).is_err());
    }

    #[test]
    fn undersampled_carrier_is_rejected() {
        // pi / omega0 ~= 1.351 fs for 810 nm; 400 fs / 256 = 1.5625 fs.
        let s = spec();
        let limit = PI / s.omega0;
        assert!((limit - 1.351e-15).abs() < 1e-18);
        match make_grid(&s, 40.0, 256) {
            Err(Error::CarrierUndersampled { t_step, .. }) => assert!(t_step > limit),
            other => panic!("expected undersampling error, got {other:?}"),
        }
        // 400 fs / 512 = 0.78 fs is fine.
        assert!(make_grid(&s, 40.0, 512).is_ok());
    }

    #[test]
    fn frequencies_follow_fft_order() {
        let grid = TimeGrid::centered(1.0, 16).unwrap();
        assert_eq!(grid.angular_frequency(0), 0.0);
        assert!((grid.angular_frequency(1) - 2.0 * PI).abs() < 1e-12);
        assert!((grid.angular_frequency(8) + 8.0 * 2.0 * PI).abs() < 1e-12);
        assert!((grid.angular_frequency(15) + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sech_spec_uses_same_grid_rules() {
        let s = PulseSpec::new(spec().omega0, Envelope::Sech, 10e-15, 1.0, 0.0).unwrap();
        assert!(make_grid(&s, 40.0, 1 << 14).is_ok());
    }
}
