use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::scenario::{Scenario, SweepParam};
use crate::error::{Error, Result};
use crate::estimation::{
    argmax, estimate_delay, fisher_info, is_unimodal, lo_scan, scan_angles, simulate_shots,
    FisherResult, MonteCarloReport, ShotRecord, MIN_SCAN_ANGLES,
};
use crate::homodyne::{
    min_resolvable_delay, sql_combined, sql_phase, sql_squeezed, sql_tof, sweep, HomodyneConfig,
    LoShape, SweepRow,
};
use crate::mode_lab::ModeBasis;
use crate::noise_budget::{build_budget, parse_noise_csv, reference_sources, Budget, NoiseSource};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqlReport {
    pub photon_number: f64,
    pub omega0: f64,
    pub delta_omega: f64,
    pub alpha: f64,
    pub u0: f64,
    pub sql_tof: f64,
    pub sql_phase: f64,
    pub sql_combined: f64,
    pub sql_squeezed: f64,
    pub r_phase_v0: f64,
    pub r_amp_v1: f64,
    /// Unit-SNR delay for the configured LO and state.
    pub min_resolvable_delay: f64,
    pub lo_mode: String,
    pub note: String,
}

/// Combined limit with `P0` squeezed by `r0` and `Q1` by `r1`.
fn squeezed_limit(basis: &ModeBasis, n: f64, r0: f64, r1: f64) -> f64 {
    let (w0, dw, a) = (basis.omega0(), basis.delta_omega, basis.alpha);
    if r0 == r1 {
        return sql_squeezed(n, w0, dw, r0);
    }
    let mix = (a * a * (-2.0 * r0).exp() + (-2.0 * r1).exp()) / (1.0 + a * a);
    sql_combined(n, w0, dw) * mix.sqrt()
}

pub fn cmd_sql(s: &Scenario) -> Result<SqlReport> {
    let basis = s.basis()?;
    let n = s.photon_number()?;
    let signal = s.signal(basis.clone(), n)?;
    let cfg = s.homodyne(basis.clone())?;
    let (w0, dw) = (basis.omega0(), basis.delta_omega);
    let tof = sql_tof(n, dw);
    let combined = sql_combined(n, w0, dw);
    let note = format!(
        "sql_tof is the envelope-only (time-of-flight) limit; sql_combined reads the timing mode w1 \
         and is lower by sqrt(1 + alpha^2) = {:.6e}. Quoted noise levels near 2e-23 s/sqrt(Hz) for \
         10 mW, 810 nm, 10 fs pulses correspond to sql_tof, not sql_combined.",
        tof / combined
    );
    Ok(SqlReport {
        photon_number: n,
        omega0: w0,
        delta_omega: dw,
        alpha: basis.alpha,
        u0: basis.u0,
        sql_tof: tof,
        sql_phase: sql_phase(n, w0),
        sql_combined: combined,
        sql_squeezed: squeezed_limit(&basis, n, s.squeezing.r_phase_v0, s.squeezing.r_amp_v1),
        r_phase_v0: s.squeezing.r_phase_v0,
        r_amp_v1: s.squeezing.r_amp_v1,
        min_resolvable_delay: min_resolvable_delay(&signal, &cfg)?,
        lo_mode: s.lo.mode.to_string(),
        note,
    })
}

fn configured_delay(s: &Scenario) -> Result<f64> {
    let basis = s.basis()?;
    let signal = s.signal(basis.clone(), s.photon_number()?)?;
    min_resolvable_delay(&signal, &s.homodyne(basis)?)
}

/// Minimum resolvable delay for the configured LO over `[run] sweep_*`.
pub fn sql_sweep(s: &Scenario) -> Result<Vec<SweepRow>> {
    let param = s.run.sweep_param;
    if param == SweepParam::None {
        return Err(Error::Config {
            line: 0,
            key: "sweep_param".into(),
            message: "no sweep configured".into(),
        });
    }
    let values = s.sweep_values()?;
    sweep(&param.to_string(), &values, |v| {
        let mut point = s.clone();
        match param {
            SweepParam::PhotonNumber => point.pulse.photon_number = Some(v),
            SweepParam::DurationFwhmFs => point.pulse.duration_fwhm_fs = v,
            SweepParam::WavelengthNm => {
                point.pulse.wavelength_nm = v;
                point.pulse.omega0_rad_per_s = None;
            }
            SweepParam::R => {
                point.squeezing.r_phase_v0 = v;
                point.squeezing.r_amp_v1 = v;
            }
            SweepParam::None => unreachable!(),
        }
        configured_delay(&point)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeDiagnostics {
    pub n_points: usize,
    pub t_step: f64,
    pub window: f64,
    pub omega0: f64,
    pub delta_omega: f64,
    pub alpha: f64,
    pub u0: f64,
    pub norm_v0: f64,
    pub norm_v1: f64,
    pub norm_w1: f64,
    pub overlap_v0_v1: f64,
    pub w1_reconstruction_error: f64,
    /// `max |e1(u) + e1(-u)| / max |e1|` for the carrier-free envelope `e1` of `v1`.
    pub v1_parity_residual: f64,
}

pub fn mode_diagnostics(basis: &ModeBasis) -> ModeDiagnostics {
    let grid = basis.grid();
    let w0 = basis.omega0();
    let env1 = basis.v1.map(|u, a| a * Complex64::from_polar(1.0, w0 * u));
    let c = grid.center_index();
    let odd = (1..c)
        .map(|j| (env1.amplitude[c + j] + env1.amplitude[c - j]).norm())
        .fold(0.0, f64::max);
    ModeDiagnostics {
        n_points: grid.n_points,
        t_step: grid.t_step,
        window: grid.window(),
        omega0: w0,
        delta_omega: basis.delta_omega,
        alpha: basis.alpha,
        u0: basis.u0,
        norm_v0: basis.v0.norm(),
        norm_v1: basis.v1.norm(),
        norm_w1: basis.w1.norm(),
        overlap_v0_v1: basis.v0.inner(&basis.v1).norm(),
        w1_reconstruction_error: basis.w1_reconstruction_error(),
        v1_parity_residual: odd / env1.max_abs(),
    }
}

pub fn cmd_modes(s: &Scenario) -> Result<Arc<ModeBasis>> {
    s.basis()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FisherSummary {
    pub n_angles: usize,
    pub scan_start_rad: f64,
    pub scan_stop_rad: f64,
    pub grid_step_rad: f64,
    pub argmax_chi_rad: f64,
    pub argmax_fisher_info: f64,
    pub w1_angle_rad: f64,
    pub peak_within_one_step: bool,
    pub unimodal: bool,
    pub crb_w1: f64,
    pub crb_first: f64,
    pub crb_last: f64,
    pub sql_combined: f64,
    pub sql_phase: f64,
    pub sql_tof: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FisherScan {
    pub rows: Vec<FisherResult>,
    pub summary: FisherSummary,
}

pub fn cmd_fisher(s: &Scenario) -> Result<FisherScan> {
    let r = &s.run;
    if r.scan_angles < MIN_SCAN_ANGLES {
        return Err(Error::Config {
            line: 0,
            key: "scan_angles".into(),
            message: format!("need at least {MIN_SCAN_ANGLES} angles, got {}", r.scan_angles),
        });
    }
    if !(r.scan_stop_rad > r.scan_start_rad) {
        return Err(Error::Config {
            line: 0,
            key: "scan_stop_rad".into(),
            message: "scan_stop_rad must exceed scan_start_rad".into(),
        });
    }
    let basis = s.basis()?;
    let n = s.photon_number()?;
    let signal = s.signal(basis.clone(), n)?;
    let angles = scan_angles(r.scan_start_rad, r.scan_stop_rad, r.scan_angles);
    let rows = lo_scan(&signal, &angles)?;
    let peak = argmax(&rows).expect("scan has at least MIN_SCAN_ANGLES rows");
    let step = (r.scan_stop_rad - r.scan_start_rad) / (r.scan_angles - 1) as f64;
    let w1_angle = LoShape::timing_angle(&basis);
    let w1 = HomodyneConfig::from_shape(basis.clone(), LoShape::Timing, signal.theta, 1.0)?;
    let crb_w1 = fisher_info(&signal, &w1, 0.0)?.crb;
    let summary = FisherSummary {
        n_angles: rows.len(),
        scan_start_rad: r.scan_start_rad,
        scan_stop_rad: r.scan_stop_rad,
        grid_step_rad: step,
        argmax_chi_rad: rows[peak].lo.mixing_angle,
        argmax_fisher_info: rows[peak].fisher_info,
        w1_angle_rad: w1_angle,
        peak_within_one_step: (rows[peak].lo.mixing_angle - w1_angle).abs() <= step,
        unimodal: is_unimodal(&rows),
        crb_w1,
        crb_first: rows[0].crb,
        crb_last: rows[rows.len() - 1].crb,
        sql_combined: sql_combined(n, basis.omega0(), basis.delta_omega),
        sql_phase: sql_phase(n, basis.omega0()),
        sql_tof: sql_tof(n, basis.delta_omega),
    };
    Ok(FisherScan { rows, summary })
}

/// Simulated outcomes and the estimator report; `seed` overrides `[run] seed`.
pub fn cmd_simulate(s: &Scenario, seed: Option<u64>) -> Result<(MonteCarloReport, ShotRecord)> {
    let r = &s.run;
    let basis = s.basis()?;
    let mut n = s.photon_number()?;
    if r.split_photon_budget {
        n /= r.n_trials.max(1) as f64;
    }
    let signal = s.signal(basis.clone(), n)?;
    let cfg = s.homodyne(basis)?;
    let record = simulate_shots(&signal, &cfg, r.delta_u_s, r.n_trials, seed.unwrap_or(r.seed))?;
    let report = estimate_delay(&record, &signal, &cfg)?;
    Ok((report, record))
}

/// Shares of the `w1` homodyne variance carried by the `P0` (phase) and `Q1` (envelope) terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomodyneVarianceView {
    pub phase_share: f64,
    pub envelope_share: f64,
    pub dominant: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    #[serde(flatten)]
    pub budget: Budget,
    pub homodyne_variance_view: HomodyneVarianceView,
}

/// Noise budget against the configured unit-SNR delay; `noise` overrides `[run] noise_csv`.
pub fn cmd_budget(s: &Scenario, noise: Option<&Path>) -> Result<BudgetReport> {
    let sources: Vec<NoiseSource> = match noise.map(Path::to_path_buf).or_else(|| s.noise_csv_path()) {
        Some(path) => parse_noise_csv(&std::fs::read_to_string(path)?)?,
        None => reference_sources(),
    };
    let basis = s.basis()?;
    let signal = s.signal(basis.clone(), s.photon_number()?)?;
    let floor = min_resolvable_delay(&signal, &s.homodyne(basis.clone())?)?;
    let budget = build_budget(&sources, floor, basis.omega0(), s.run.rss_total)?;

    let a2 = basis.alpha * basis.alpha;
    let phase = a2 * signal.phase_variance_v0();
    let envelope = signal.amplitude_variance_v1();
    let total = phase + envelope;
    Ok(BudgetReport {
        budget,
        homodyne_variance_view: HomodyneVarianceView {
            phase_share: phase / total,
            envelope_share: envelope / total,
            dominant: if phase >= envelope { "phase" } else { "envelope" },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Scenario {
        let mut s = Scenario::default();
        s.grid.n_points = 1 << 13;
        s
    }

    #[test]
    fn sql_reference_record() {
        let report = cmd_sql(&small()).unwrap();
        assert!((report.sql_tof / 2.1e-23 - 1.0).abs() < 0.01);
        assert!((report.sql_combined / 1.06e-24 - 1.0).abs() < 0.01);
        assert_eq!(report.sql_squeezed, report.sql_combined);
        assert!((report.min_resolvable_delay / report.sql_combined - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halving_squeezing() {
        let mut s = small();
        s.squeezing.r_phase_v0 = 2f64.ln();
        s.squeezing.r_amp_v1 = 2f64.ln();
        let report = cmd_sql(&s).unwrap();
        assert!((report.sql_squeezed / (report.sql_combined / 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unequal_squeezing_matches_the_state_model() {
        let mut s = small();
        s.squeezing.r_phase_v0 = 0.7;
        s.squeezing.r_amp_v1 = 0.2;
        let report = cmd_sql(&s).unwrap();
        assert!((report.sql_squeezed / report.min_resolvable_delay - 1.0).abs() < 1e-9);
    }

    #[test]
    fn photon_number_sweep_scales_as_inverse_root() {
        let mut s = small();
        s.run.sweep_param = SweepParam::PhotonNumber;
        s.run.sweep_start = 1e10;
        s.run.sweep_stop = 1e14;
        s.run.sweep_points = 3;
        s.run.sweep_log = true;
        let rows = sql_sweep(&s).unwrap();
        assert!((rows[0].delta_u_min_seconds / rows[1].delta_u_min_seconds - 10.0).abs() < 1e-9);
        assert!((rows[1].delta_u_min_seconds / rows[2].delta_u_min_seconds - 10.0).abs() < 1e-9);
        assert!(sql_sweep(&small()).is_err());
    }

    #[test]
    fn modes_diagnostics_are_clean() {
        let d = mode_diagnostics(&cmd_modes(&small()).unwrap());
        assert!((d.norm_v0 - 1.0).abs() < 1e-10 && (d.norm_w1 - 1.0).abs() < 1e-10);
        assert!(d.v1_parity_residual < 1e-12);
        assert!(d.w1_reconstruction_error < 1e-10);
    }

    #[test]
    fn fisher_scan_summary() {
        let scan = cmd_fisher(&small()).unwrap();
        assert!(scan.summary.peak_within_one_step);
        assert!(scan.summary.unimodal);
        assert!((scan.summary.crb_w1 / scan.summary.sql_combined - 1.0).abs() < 1e-9);
        assert!((scan.summary.crb_first / scan.summary.sql_phase - 1.0).abs() < 1e-9);
        assert!((scan.summary.crb_last / scan.summary.sql_tof - 1.0).abs() < 1e-9);
    }

    #[test]
    fn simulate_seed_override() {
        let mut s = small();
        s.run.n_trials = 1000;
        let (a, _) = cmd_simulate(&s, Some(3)).unwrap();
        let (b, _) = cmd_simulate(&s, Some(3)).unwrap();
        let (c, _) = cmd_simulate(&s, None).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.estimator_mean, c.estimator_mean);
        assert_eq!(a.seed, 3);
    }

    #[test]
    fn budget_views() {
        let report = cmd_budget(&small(), None).unwrap();
        assert_eq!(
            report.budget.dominant().source.kind,
            crate::noise_budget::NoiseKind::RepRateJitter
        );
        assert_eq!(report.homodyne_variance_view.dominant, "phase");
        let shares = report.homodyne_variance_view.phase_share + report.homodyne_variance_view.envelope_share;
        assert!((shares - 1.0).abs() < 1e-15);
    }
}
