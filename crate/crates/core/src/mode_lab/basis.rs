use num_complex::Complex64;

use super::grid::{validate_grid, TimeGrid};
use super::pulse::PulseSpec;
use super::sampled::SampledMode;
use super::spectral::{derivative, shift_mode, spectral_width};
use crate::error::{Error, Result};

/// Shifts larger than this fraction of the pulse FWHM leave the first-order regime.
pub const FIRST_ORDER_SHIFT_FRACTION: f64 = 0.1;

/// Mean pulse mode `v0`, derivative mode `v1` and timing mode `w1` of one pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub spec: PulseSpec,
    /// Real, even, unit-norm envelope `g0` (carrier removed).
    pub envelope: SampledMode,
    pub v0: SampledMode,
    pub v1: SampledMode,
    pub w1: SampledMode,
    /// `omega0 / delta_omega`, roughly the number of carrier cycles under the envelope.
    pub alpha: f64,
    /// `1 / sqrt(omega0^2 + delta_omega^2)`, seconds.
    pub u0: f64,
    /// Statistical frequency width of the envelope, rad/s.
    pub delta_omega: f64,
}

/// Samples the unit-norm envelope `g0` of `spec` on `grid`.
pub fn make_envelope(spec: &PulseSpec, grid: &TimeGrid) -> Result<SampledMode> {
    validate_grid(spec, grid)?;
    let tau = spec.tau();
    let envelope = spec.envelope;
    SampledMode::from_fn(*grid, "g0", |u| {
        Complex64::new(envelope.amplitude(u, tau), 0.0)
    })
    .normalized()
}

fn carrier(omega0: f64) -> impl Fn(f64, Complex64) -> Complex64 {
    move |u, a| a * Complex64::from_polar(1.0, -omega0 * u)
}

pub fn build_basis(spec: &PulseSpec, grid: &TimeGrid) -> Result<ModeBasis> {
    let envelope = make_envelope(spec, grid)?;
    let delta_omega = spectral_width(&envelope)?;
    let omega0 = spec.omega0;

    let v0 = envelope.map(carrier(omega0)).with_label("v0");

    // -dv0/du = -(g0' - i omega0 g0) e^{-i omega0 u}, orthonormalized against v0.
    let slope = derivative(&envelope);
    let minus_dv0 = SampledMode::new(
        *grid,
        slope
            .amplitude
            .iter()
            .zip(&envelope.amplitude)
            .zip(grid.times())
            .map(|((d, g), u)| {
                -(d - Complex64::i() * omega0 * g) * Complex64::from_polar(1.0, -omega0 * u)
            })
            .collect(),
        "v1",
    )?;
    let overlap = v0.inner(&minus_dv0);
    let v1 = minus_dv0.add_scaled(-overlap, &v0).normalized()?;

    let alpha = omega0 / delta_omega;
    let u0 = 1.0 / omega0.hypot(delta_omega);
    let norm = 1.0 / alpha.hypot(1.0);
    let w1 = v1
        .add_scaled(Complex64::new(0.0, alpha), &v0)
        .scaled(Complex64::new(norm, 0.0))
        .with_label("w1");

    Ok(ModeBasis {
        spec: *spec,
        envelope,
        v0,
        v1,
        w1,
        alpha,
        u0,
        delta_omega,
    })
}

impl ModeBasis {
    pub fn grid(&self) -> &TimeGrid {
        &self.v0.grid
    }

    pub fn omega0(&self) -> f64 {
        self.spec.omega0
    }

    /// Largest shift accepted by [`ModeBasis::project_shift`].
    pub fn first_order_bound(&self) -> f64 {
        FIRST_ORDER_SHIFT_FRACTION * self.spec.duration_fwhm
    }

    /// `v0(u - delta_u)`, computed exactly in the frequency domain.
    pub fn shifted_v0(&self, delta_u: f64) -> Result<SampledMode> {
        shift_mode(&self.v0, delta_u)
    }

    /// Timing coefficient `<w1|v0(. - du)> - <w1|v0>`.
    ///
    /// The constant `<w1|v0> = -i alpha / sqrt(alpha^2 + 1)` is the phase-reference part
    /// of the projection and carries no timing information, so it is removed. The real
    /// part equals `du / u0` up to third order; the imaginary part starts at second order.
    pub fn project_shift(&self, delta_u: f64) -> Result<Complex64> {
        let bound = self.first_order_bound();
        if !(delta_u.abs() < bound) {
            return Err(Error::ShiftOutOfRange { delta_u, bound });
        }
        let shifted = self.shifted_v0(delta_u)?;
        let change = shifted.add_scaled(Complex64::new(-1.0, 0.0), &self.v0);
        Ok(self.w1.inner(&change))
    }

    /// Grid norm of `v0(. - du) - v0 - (du/u0) w1`, the error of the first-order expansion.
    pub fn expansion_residual(&self, delta_u: f64) -> Result<f64> {
        let shifted = self.shifted_v0(delta_u)?;
        let first_order = self
            .v0
            .add_scaled(Complex64::new(delta_u / self.u0, 0.0), &self.w1);
        Ok(shifted.distance(&first_order))
    }

    /// Largest pointwise deviation of `w1` from `(i alpha v0 + v1)/sqrt(alpha^2 + 1)`.
    pub fn w1_reconstruction_error(&self) -> f64 {
        let norm = 1.0 / self.alpha.hypot(1.0);
        self.w1
            .amplitude
            .iter()
            .zip(self.v0.amplitude.iter().zip(&self.v1.amplitude))
            .map(|(w, (a, b))| (w - (Complex64::new(0.0, self.alpha) * a + b) * norm).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_lab::{make_grid, Envelope};

    fn reference() -> ModeBasis {
        let spec = PulseSpec::reference();
        let grid = make_grid(&spec, 40.0, 1 << 16).unwrap();
        build_basis(&spec, &grid).unwrap()
    }

    #[test]
    fn gaussian_envelope_peak_matches_analytic_normalization() {
        let spec = PulseSpec::reference();
        let grid = make_grid(&spec, 40.0, 1 << 16).unwrap();
        let g0 = make_envelope(&spec, &grid).unwrap();
        let tau = 10e-15 / (2.0 * 2f64.ln().sqrt());
        assert!((tau - 6.005_612_04e-15).abs() < 1e-22);
        let peak = (std::f64::consts::PI * tau * tau).powf(-0.25);
        let at_zero = g0.amplitude[grid.center_index()].re;
        assert!((at_zero / peak - 1.0).abs() < 1e-10);
        g0.check_unit_norm(1e-10).unwrap();
    }

    #[test]
    fn sech_envelope_is_even() {
        let spec = PulseSpec::new(PulseSpec::reference().omega0, Envelope::Sech, 10e-15, 1.0, 0.0)
            .unwrap();
        let grid = make_grid(&spec, 40.0, 1 << 14).unwrap();
        let g0 = make_envelope(&spec, &grid).unwrap();
        let c = grid.center_index();
        for j in 1..c {
            assert_eq!(g0.amplitude[c + j], g0.amplitude[c - j]);
        }
    }

    #[test]
    fn gaussian_v1_is_first_hermite_gauss() {
        let basis = reference();
        let tau = basis.spec.tau();
        let omega0 = basis.omega0();
        // (u/tau) exp(-u^2/2tau^2) normalized: sqrt(2) / (pi^(1/4) tau^(1/2)); v1 = -g0'/dw > 0 for u > 0.
        let c = 2f64.sqrt() / (std::f64::consts::PI.powf(0.25) * tau.sqrt());
        let expect = SampledMode::from_fn(*basis.grid(), "hg1", |u| {
            Complex64::from_polar(c * u / tau * (-u * u / (2.0 * tau * tau)).exp(), -omega0 * u)
        });
        assert!(basis.v1.max_abs_diff(&expect) / expect.max_abs() < 1e-9);
        basis.v1.check_unit_norm(1e-10).unwrap();
    }

    #[test]
    fn v1_matches_envelope_derivative_formula() {
        let basis = reference();
        let slope = derivative(&basis.envelope);
        let eq6 = slope
            .scaled(Complex64::new(-1.0 / basis.delta_omega, 0.0))
            .map(carrier(basis.omega0()));
        assert!(basis.v1.max_abs_diff(&eq6) / eq6.max_abs() < 1e-10);
    }

    #[test]
    fn reference_alpha_and_u0() {
        let basis = reference();
        assert!((basis.omega0() - 2.3255e15).abs() / 2.3255e15 < 1e-4);
        assert!((basis.delta_omega - 1.1774e14).abs() / 1.1774e14 < 1e-4);
        assert!((basis.alpha - 19.75).abs() < 0.02);
        assert!((basis.u0 - 4.294e-16).abs() < 0.002e-16);
        let u0 = 1.0 / (basis.omega0().powi(2) + basis.delta_omega.powi(2)).sqrt();
        assert!((basis.u0 / u0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormality_and_w1_identity() {
        let basis = reference();
        assert!(basis.v0.inner(&basis.v1).norm() < 1e-8);
        basis.v0.check_unit_norm(1e-10).unwrap();
        basis.w1.check_unit_norm(1e-10).unwrap();
        assert!(basis.w1_reconstruction_error() < 1e-10);
        // w1 is not orthogonal to v0: it carries the phase component i alpha v0.
        let expect = Complex64::new(0.0, -basis.alpha / basis.alpha.hypot(1.0));
        assert!((basis.w1.inner(&basis.v0) - expect).norm() < 1e-10);
    }

    #[test]
    fn project_shift_is_zero_without_shift_and_linear_for_small_shifts() {
        let basis = reference();
        assert!(basis.project_shift(0.0).unwrap().norm() < 1e-10);
        let du = 1e-18;
        let c = basis.project_shift(du).unwrap();
        let first = du / basis.u0;
        assert!((first - 2.329e-3).abs() < 0.002e-3);
        assert!((c.re / first - 1.0).abs() < 1e-4);
        assert!(matches!(
            basis.project_shift(2e-15),
            Err(Error::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_grid_that_undersamples_the_carrier() {
        let spec = PulseSpec::reference();
        let grid = TimeGrid::centered(400e-15, 256).unwrap();
        assert!(matches!(
            build_basis(&spec, &grid),
            Err(Error::CarrierUndersampled { .. })
        ));
    }
}
