//! Scenario files: `key = value` lines under `[section]` headers, `#` comments.
//!
//! Every key has a default, so an empty file is the 10 mW / 810 nm / 10 fs reference.
//! Unknown sections, unknown keys and repeated keys are rejected with the offending line.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homodyne::{HomodyneConfig, LoShape};
use crate::mode_lab::{
    build_basis, make_grid, Envelope, ModeBasis, PulseSpec, DEFAULT_GUARD_FACTOR, DEFAULT_POINTS,
    MIN_GUARD_FACTOR,
};
use crate::quantum_state::{apply_squeezing, coherent_state, photons_from_power, FieldState, SqueezingSpec};
use crate::constants::omega_from_wavelength;

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSection {
    pub wavelength_nm: f64,
    /// Overrides `wavelength_nm` when set.
    pub omega0_rad_per_s: Option<f64>,
    pub envelope: Envelope,
    pub duration_fwhm_fs: f64,
    pub power_w: f64,
    pub detection_time_s: f64,
    /// Overrides `power_w * detection_time_s / (hbar omega0)` when set.
    pub photon_number: Option<f64>,
    pub theta_rad: f64,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            wavelength_nm: 810.0,
            omega0_rad_per_s: None,
            envelope: Envelope::Gaussian,
            duration_fwhm_fs: 10.0,
            power_w: 10e-3,
            detection_time_s: 1.0,
            photon_number: None,
            theta_rad: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SqueezingSection {
    pub r_phase_v0: f64,
    pub r_amp_v1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoSection {
    pub mode: LoShape,
    /// Defaults to the pulse phase.
    pub theta_lo_rad: Option<f64>,
    pub photon_number: f64,
    pub strong: bool,
    pub detector_scale: f64,
}

impl Default for LoSection {
    fn default() -> Self {
        Self {
            mode: LoShape::Timing,
            theta_lo_rad: None,
            photon_number: 1e18,
            strong: true,
            detector_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSection {
    pub guard_factor: f64,
    pub n_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            guard_factor: DEFAULT_GUARD_FACTOR,
            n_points: DEFAULT_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepParam {
    #[default]
    None,
    PhotonNumber,
    DurationFwhmFs,
    WavelengthNm,
    /// Equal squeezing on `P0` and `Q1`.
    R,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::None => "none",
            SweepParam::PhotonNumber => "photon_number",
            SweepParam::DurationFwhmFs => "duration_fwhm_fs",
            SweepParam::WavelengthNm => "wavelength_nm",
            SweepParam::R => "r",
        })
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "none" => SweepParam::None,
            "photon_number" => SweepParam::PhotonNumber,
            "duration_fwhm_fs" => SweepParam::DurationFwhmFs,
            "wavelength_nm" => SweepParam::WavelengthNm,
            "r" => SweepParam::R,
            other => {
                return Err(format!(
                    "unknown sweep parameter `{other}` (expected none, photon_number, duration_fwhm_fs, wavelength_nm or r)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub n_trials: usize,
    pub seed: u64,
    pub delta_u_s: f64,
    /// Divide the pulse photon number evenly over the trials (pulse-train repetition).
    pub split_photon_budget: bool,
    pub scan_angles: usize,
    pub scan_start_rad: f64,
    pub scan_stop_rad: f64,
    pub sweep_param: SweepParam,
    pub sweep_start: f64,
    pub sweep_stop: f64,
    pub sweep_points: usize,
    pub sweep_log: bool,
    /// Relative paths resolve against the scenario file's directory.
    pub noise_csv: Option<PathBuf>,
    pub rss_total: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n_trials: 100_000,
            seed: 0,
            delta_u_s: 0.0,
            split_photon_budget: false,
            scan_angles: 256,
            scan_start_rad: 0.0,
            scan_stop_rad: FRAC_PI_2,
            sweep_param: SweepParam::None,
            sweep_start: 0.0,
            sweep_stop: 0.0,
            sweep_points: 16,
            sweep_log: false,
            noise_csv: None,
            rss_total: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub pulse: PulseSection,
    pub squeezing: SqueezingSection,
    pub lo: LoSection,
    pub grid: GridSection,
    pub run: RunSection,
    /// Directory of the scenario file, if it came from one.
    pub base_dir: Option<PathBuf>,
}

/// Every accepted key with its default, as printed by `--schema`.
pub const SCENARIO_KEYS: &[(&str, &str, &str)] = &[
    ("pulse", "wavelength_nm", "810"),
    ("pulse", "omega0_rad_per_s", "unset (from wavelength_nm)"),
    ("pulse", "envelope", "gaussian (gaussian|sech)"),
    ("pulse", "duration_fwhm_fs", "10"),
    ("pulse", "power_w", "0.01"),
    ("pulse", "detection_time_s", "1"),
    ("pulse", "photon_number", "unset (from power_w and detection_time_s)"),
    ("pulse", "theta_rad", "0"),
    ("squeezing", "r_phase_v0", "0"),
    ("squeezing", "r_amp_v1", "0"),
    ("squeezing", "r_db", "unset (sets both r values from a dB figure)"),
    ("lo", "mode", "w1 (w1|iv0|v1|mix:<angle_rad>)"),
    ("lo", "theta_lo_rad", "unset (pulse theta_rad)"),
    ("lo", "photon_number", "1e18"),
    ("lo", "strong", "true"),
    ("lo", "detector_scale", "1"),
    ("grid", "guard_factor", "40"),
    ("grid", "n_points", "65536"),
    ("run", "n_trials", "100000"),
    ("run", "seed", "0"),
    ("run", "delta_u_s", "0"),
    ("run", "split_photon_budget", "false"),
    ("run", "scan_angles", "256"),
    ("run", "scan_start_rad", "0"),
    ("run", "scan_stop_rad", "1.5707963267948966"),
    ("run", "sweep_param", "none (none|photon_number|duration_fwhm_fs|wavelength_nm|r)"),
    ("run", "sweep_start", "0"),
    ("run", "sweep_stop", "0"),
    ("run", "sweep_points", "16"),
    ("run", "sweep_log", "false"),
    ("run", "noise_csv", "unset (built-in comb figures)"),
    ("run", "rss_total", "false"),
];

fn config_err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_owned(),
        message: message.into(),
    }
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        config_err(self.line, self.key, message)
    }

    fn parse<T: FromStr>(&self, what: &str) -> Result<T> {
        self.value
            .parse()
            .map_err(|_| self.err(format!("`{}` is not {what}", self.value)))
    }

    fn float(&self) -> Result<f64> {
        let x: f64 = self.parse("a number")?;
        if !x.is_finite() {
            return Err(self.err("must be finite"));
        }
        Ok(x)
    }

    fn positive(&self) -> Result<f64> {
        let x = self.float()?;
        if x <= 0.0 {
            return Err(self.err(format!("must be > 0, got {x}")));
        }
        Ok(x)
    }

    fn non_negative(&self) -> Result<f64> {
        let x = self.float()?;
        if x < 0.0 {
            return Err(self.err(format!("must be >= 0, got {x}")));
        }
        Ok(x)
    }

    fn boolean(&self) -> Result<bool> {
        self.parse("true or false")
    }

    fn count(&self) -> Result<usize> {
        self.parse("a non-negative integer")
    }

    fn with<T>(&self, parsed: std::result::Result<T, String>) -> Result<T> {
        parsed.map_err(|m| self.err(m))
    }
}

fn unquote(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut scenario = Self::parse(&text)?;
        scenario.base_dir = path.parent().map(Path::to_path_buf);
        Ok(scenario)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Scenario::default();
        let mut section: Option<&str> = None;
        let mut seen: HashMap<(String, String), usize> = HashMap::new();
        let mut r_db_line = None;
        let mut r_line = None;
        let mut power_line = None;
        let mut photon_line = None;

        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| config_err(line, content, "unterminated section header"))?
                    .trim();
                if !matches!(name, "pulse" | "squeezing" | "lo" | "grid" | "run") {
                    return Err(config_err(
                        line,
                        name,
                        "unknown section (expected pulse, squeezing, lo, grid or run)",
                    ));
                }
                section = Some(name);
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected `key = value`"))?;
            let e = Entry {
                line,
                key: key.trim(),
                value: unquote(value.trim()),
            };
            let Some(sec) = section else {
                return Err(e.err("key appears before any [section] header"));
            };
            if let Some(first) = seen.insert((sec.to_owned(), e.key.to_owned()), line) {
                return Err(e.err(format!("duplicate key (first set on line {first})")));
            }

            match (sec, e.key) {
                ("pulse", "wavelength_nm") => s.pulse.wavelength_nm = e.positive()?,
                ("pulse", "omega0_rad_per_s") => s.pulse.omega0_rad_per_s = Some(e.positive()?),
                ("pulse", "envelope") => s.pulse.envelope = e.with(e.value.parse())?,
                ("pulse", "duration_fwhm_fs") => s.pulse.duration_fwhm_fs = e.positive()?,
                ("pulse", "power_w") => {
                    s.pulse.power_w = e.positive()?;
                    power_line = Some(line);
                }
                ("pulse", "detection_time_s") => {
                    s.pulse.detection_time_s = e.positive()?;
                    power_line = Some(line);
                }
                ("pulse", "photon_number") => {
                    s.pulse.photon_number = Some(e.positive()?);
                    photon_line = Some(line);
                }
                ("pulse", "theta_rad") => s.pulse.theta_rad = e.float()?,
                ("squeezing", "r_phase_v0") => {
                    s.squeezing.r_phase_v0 = e.non_negative()?;
                    r_line = Some(line);
                }
                ("squeezing", "r_amp_v1") => {
                    s.squeezing.r_amp_v1 = e.non_negative()?;
                    r_line = Some(line);
                }
                ("squeezing", "r_db") => {
                    let r = SqueezingSpec::r_from_db(e.non_negative()?);
                    s.squeezing = SqueezingSection {
                        r_phase_v0: r,
                        r_amp_v1: r,
                    };
                    r_db_line = Some(line);
                }
                ("lo", "mode") => s.lo.mode = e.with(e.value.parse())?,
                ("lo", "theta_lo_rad") => s.lo.theta_lo_rad = Some(e.float()?),
                ("lo", "photon_number") => s.lo.photon_number = e.positive()?,
                ("lo", "strong") => s.lo.strong = e.boolean()?,
                ("lo", "detector_scale") => s.lo.detector_scale = e.positive()?,
                ("grid", "guard_factor") => {
                    let g = e.positive()?;
                    if g < MIN_GUARD_FACTOR {
                        return Err(e.err(format!("must be >= {MIN_GUARD_FACTOR}, got {g}")));
                    }
                    s.grid.guard_factor = g;
                }
                ("grid", "n_points") => {
                    let n = e.count()?;
                    if n < 16 || !n.is_power_of_two() {
                        return Err(e.err(format!("must be a power of two >= 16, got {n}")));
                    }
                    s.grid.n_points = n;
                }
                ("run", "n_trials") => s.run.n_trials = e.count()?,
                ("run", "seed") => s.run.seed = e.parse("an unsigned 64-bit integer")?,
                ("run", "delta_u_s") => s.run.delta_u_s = e.float()?,
                ("run", "split_photon_budget") => s.run.split_photon_budget = e.boolean()?,
                ("run", "scan_angles") => s.run.scan_angles = e.count()?,
                ("run", "scan_start_rad") => s.run.scan_start_rad = e.float()?,
                ("run", "scan_stop_rad") => s.run.scan_stop_rad = e.float()?,
                ("run", "sweep_param") => s.run.sweep_param = e.with(e.value.parse())?,
                ("run", "sweep_start") => s.run.sweep_start = e.float()?,
                ("run", "sweep_stop") => s.run.sweep_stop = e.float()?,
                ("run", "sweep_points") => {
                    let n = e.count()?;
                    if n < 2 {
                        return Err(e.err("need at least 2 points"));
                    }
                    s.run.sweep_points = n;
                }
                ("run", "sweep_log") => s.run.sweep_log = e.boolean()?,
                ("run", "noise_csv") => s.run.noise_csv = Some(PathBuf::from(e.value)),
                ("run", "rss_total") => s.run.rss_total = e.boolean()?,
                (sec, key) => {
                    let known: Vec<&str> = SCENARIO_KEYS
                        .iter()
                        .filter(|(s, _, _)| *s == sec)
                        .map(|(_, k, _)| *k)
                        .collect();
                    return Err(config_err(
                        line,
                        key,
                        format!("unknown key in [{sec}] (known: {})", known.join(", ")),
                    ));
                }
            }
        }

        if let (Some(a), Some(b)) = (r_db_line, r_line) {
            return Err(config_err(
                a.max(b),
                "r_db",
                "set either r_db or r_phase_v0/r_amp_v1, not both",
            ));
        }
        if let (Some(a), Some(b)) = (power_line, photon_line) {
            return Err(config_err(
                a.max(b),
                "photon_number",
                "set either photon_number or power_w/detection_time_s, not both",
            ));
        }
        Ok(s)
    }

    pub fn omega0(&self) -> f64 {
        self.pulse
            .omega0_rad_per_s
            .unwrap_or_else(|| omega_from_wavelength(self.pulse.wavelength_nm / 1e9))
    }

    pub fn photon_number(&self) -> Result<f64> {
        match self.pulse.photon_number {
            Some(n) => Ok(n),
            None => photons_from_power(self.pulse.power_w, self.pulse.detection_time_s, self.omega0()),
        }
    }

    pub fn pulse_spec(&self) -> Result<PulseSpec> {
        PulseSpec::new(
            self.omega0(),
            self.pulse.envelope,
            self.pulse.duration_fwhm_fs / 1e15,
            self.photon_number()?,
            self.pulse.theta_rad,
        )
    }

    pub fn squeezing_spec(&self) -> Result<SqueezingSpec> {
        SqueezingSpec::new(self.squeezing.r_phase_v0, self.squeezing.r_amp_v1)
    }

    pub fn basis_for(&self, spec: &PulseSpec) -> Result<Arc<ModeBasis>> {
        let grid = make_grid(spec, self.grid.guard_factor, self.grid.n_points)?;
        Ok(Arc::new(build_basis(spec, &grid)?))
    }

    pub fn basis(&self) -> Result<Arc<ModeBasis>> {
        self.basis_for(&self.pulse_spec()?)
    }

    /// Coherent pulse of the scenario with its squeezing applied.
    pub fn signal(&self, basis: Arc<ModeBasis>, photon_number: f64) -> Result<FieldState> {
        let coherent = coherent_state(basis, photon_number, self.pulse.theta_rad)?;
        Ok(apply_squeezing(&coherent, &self.squeezing_spec()?))
    }

    pub fn homodyne(&self, basis: Arc<ModeBasis>) -> Result<HomodyneConfig> {
        let theta_lo = self.lo.theta_lo_rad.unwrap_or(self.pulse.theta_rad);
        let lo = self.lo.mode.sample(&basis);
        HomodyneConfig::new(basis, lo, theta_lo, self.lo.photon_number, self.lo.strong)?
            .with_detector_scale(self.lo.detector_scale)
    }

    pub fn noise_csv_path(&self) -> Option<PathBuf> {
        self.run.noise_csv.as_ref().map(|p| match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    }

    /// Sweep values from `sweep_start` to `sweep_stop`, linear or logarithmic.
    pub fn sweep_values(&self) -> Result<Vec<f64>> {
        let r = &self.run;
        let (a, b, n) = (r.sweep_start, r.sweep_stop, r.sweep_points);
        if r.sweep_log {
            if !(a > 0.0 && b > 0.0) {
                return Err(config_err(0, "sweep_start", "log sweeps need positive endpoints"));
            }
            let (la, lb) = (a.log10(), b.log10());
            Ok((0..n)
                .map(|k| match k {
                    0 => a,
                    k if k == n - 1 => b,
                    k => 10f64.powf(la + (lb - la) * k as f64 / (n - 1) as f64),
                })
                .collect())
        } else {
            Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_scenario() {
        let s = Scenario::parse("# nothing\n").unwrap();
        assert_eq!(s, Scenario::default());
        assert_eq!(s.pulse_spec().unwrap(), PulseSpec::reference());
    }

    #[test]
    fn full_file_parses() {
        let text = "\
[pulse]
wavelength_nm = 1550   # telecom
envelope = sech
duration_fwhm_fs = 100
photon_number = 1e12
theta_rad = 0.25

[squeezing]
r_phase_v0 = 0.5
r_amp_v1 = 0.25

[lo]
mode = mix:0.3
theta_lo_rad = 0.25
photon_number = 1e15
strong = true

[grid]
guard_factor = 30
n_points = 4096

[run]
n_trials = 1000
seed = 42
noise_csv = \"noise.csv\"
";
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.pulse.envelope, Envelope::Sech);
        assert_eq!(s.pulse.photon_number, Some(1e12));
        assert_eq!(s.lo.mode, LoShape::Mix(0.3));
        assert_eq!(s.grid.n_points, 4096);
        assert_eq!(s.run.seed, 42);
        assert_eq!(s.run.noise_csv, Some(PathBuf::from("noise.csv")));
        assert_eq!(s.squeezing_spec().unwrap(), SqueezingSpec::new(0.5, 0.25).unwrap());
    }

    fn config_error(text: &str) -> (usize, String) {
        match Scenario::parse(text) {
            Err(Error::Config { line, key, .. }) => (line, key),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys_with_line_numbers() {
        assert_eq!(config_error("[pulse]\nwavelenght_nm = 800\n"), (2, "wavelenght_nm".into()));
        assert_eq!(config_error("[pulse]\ntheta_rad = 0\n\ntheta_rad = 1\n"), (4, "theta_rad".into()));
        assert_eq!(config_error("[pulsee]\n"), (1, "pulsee".into()));
        assert_eq!(config_error("seed = 1\n"), (1, "seed".into()));
        assert_eq!(config_error("[run]\nseed = -1\n"), (2, "seed".into()));
        assert_eq!(config_error("[grid]\nn_points = 1000\n"), (2, "n_points".into()));
        assert_eq!(config_error("[lo]\nmode = tem01\n"), (2, "mode".into()));
        assert_eq!(config_error("[squeezing]\nr_phase_v0 = -0.1\n"), (2, "r_phase_v0".into()));
    }

    #[test]
    fn conflicting_keys_are_rejected() {
        let (line, _) = config_error("[pulse]\npower_w = 1\nphoton_number = 5\n");
        assert_eq!(line, 3);
        let (line, key) = config_error("[squeezing]\nr_db = 10\nr_amp_v1 = 1\n");
        assert_eq!((line, key.as_str()), (3, "r_db"));
    }

    #[test]
    fn r_db_sets_both_parameters() {
        let s = Scenario::parse("[squeezing]\nr_db = 10\n").unwrap();
        let r = 10f64.ln() / 2.0;
        assert!((s.squeezing.r_phase_v0 - r).abs() < 1e-15);
        assert_eq!(s.squeezing.r_phase_v0, s.squeezing.r_amp_v1);
    }

    #[test]
    fn sweep_values_linear_and_log() {
        let mut s = Scenario::default();
        s.run.sweep_start = 1.0;
        s.run.sweep_stop = 100.0;
        s.run.sweep_points = 3;
        assert_eq!(s.sweep_values().unwrap(), vec![1.0, 50.5, 100.0]);
        s.run.sweep_log = true;
        let v = s.sweep_values().unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
    }
}
