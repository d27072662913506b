//! Technical noise quoted at one Fourier frequency, converted to timing ASD and set next to
//! the quantum floor.
//!
//! The quantum floor is the single-window minimum resolvable delay for a 1 s window, read
//! as an amplitude spectral density in s/sqrt(Hz) (1 s integration <-> 1 Hz bandwidth).

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sci;

pub const NOISE_CSV_HEADER: &str = "kind,amplitude,units,at_frequency_hz";
pub const BUDGET_CSV_HEADER: &str = "kind,timing_asd_s_per_rtHz,ratio_to_quantum_floor,dominant";
pub const CURVE_CSV_HEADER: &str = "frequency_hz,asd";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// Carrier-envelope phase noise, rad/sqrt(Hz).
    CeoPhase,
    /// Repetition-rate timing jitter, s/sqrt(Hz).
    RepRateJitter,
    /// Quantum-limited timing floor, s/sqrt(Hz).
    QuantumFloor,
}

impl NoiseKind {
    pub fn native_units(self) -> &'static str {
        match self {
            NoiseKind::CeoPhase => "rad/rtHz",
            _ => "s/rtHz",
        }
    }

    fn accepts_units(self, units: &str) -> bool {
        let phase = matches!(units, "rad/rtHz" | "rad/sqrt(Hz)" | "rad/√Hz");
        let time = matches!(units, "s/rtHz" | "s/sqrt(Hz)" | "s/√Hz");
        match self {
            NoiseKind::CeoPhase => phase,
            _ => time,
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::CeoPhase => "ceo_phase",
            NoiseKind::RepRateJitter => "rep_rate_jitter",
            NoiseKind::QuantumFloor => "quantum_floor",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ceo_phase" => Ok(NoiseKind::CeoPhase),
            "rep_rate_jitter" => Ok(NoiseKind::RepRateJitter),
            "quantum_floor" => Ok(NoiseKind::QuantumFloor),
            other => Err(format!(
                "unknown noise kind `{other}` (expected ceo_phase, rep_rate_jitter or quantum_floor)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSource {
    pub kind: NoiseKind,
    /// Native units: rad/sqrt(Hz) for phase, s/sqrt(Hz) otherwise.
    pub amplitude: f64,
    /// Fourier frequency the figure is quoted at, Hz.
    pub at_frequency: f64,
}

impl NoiseSource {
    pub fn new(kind: NoiseKind, amplitude: f64, at_frequency: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::param("amplitude", format!("must be finite and >= 0, got {amplitude}")));
        }
        if !(at_frequency.is_finite() && at_frequency >= 0.0) {
            return Err(Error::param("at_frequency", format!("must be finite and >= 0, got {at_frequency}")));
        }
        Ok(Self {
            kind,
            amplitude,
            at_frequency,
        })
    }

    /// Timing ASD in s/sqrt(Hz).
    pub fn timing_asd(&self, omega0: f64) -> Result<f64> {
        match self.kind {
            NoiseKind::CeoPhase => phase_to_timing(self.amplitude, omega0),
            _ => Ok(self.amplitude),
        }
    }
}

/// Carrier phase noise to timing noise: `phase / omega0`.
pub fn phase_to_timing(phase_asd: f64, omega0: f64) -> Result<f64> {
    check_conversion(phase_asd, omega0)?;
    Ok(phase_asd / omega0)
}

/// Inverse of [`phase_to_timing`].
pub fn timing_to_phase(timing_asd: f64, omega0: f64) -> Result<f64> {
    check_conversion(timing_asd, omega0)?;
    Ok(timing_asd * omega0)
}

fn check_conversion(asd: f64, omega0: f64) -> Result<()> {
    if !(asd.is_finite() && asd >= 0.0) {
        return Err(Error::param("asd", format!("must be finite and >= 0, got {asd}")));
    }
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::param("omega0", format!("must be finite and > 0, got {omega0}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetRow {
    pub source: NoiseSource,
    pub timing_asd: f64,
    pub ratio_to_quantum_floor: f64,
    pub dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Budget {
    pub rows: Vec<BudgetRow>,
    pub quantum_floor: f64,
    /// Root-sum-square of all rows, when requested.
    pub rss_total: Option<f64>,
}

impl Budget {
    pub fn dominant(&self) -> &BudgetRow {
        self.rows
            .iter()
            .find(|r| r.dominant)
            .expect("a budget always has a dominant row")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{BUDGET_CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                row.source.kind,
                sci(row.timing_asd),
                sci(row.ratio_to_quantum_floor),
                row.dominant
            )?;
        }
        if let Some(total) = self.rss_total {
            writeln!(out, "rss_total,{},{},false", sci(total), sci(total / self.quantum_floor))?;
        }
        Ok(())
    }
}

/// Converts every source to s/sqrt(Hz), appends the quantum floor row and marks the
/// largest row dominant (first in listing order on ties).
pub fn build_budget(
    sources: &[NoiseSource],
    quantum_floor: f64,
    omega0: f64,
    rss_total: bool,
) -> Result<Budget> {
    if sources.is_empty() {
        return Err(Error::param("sources", "need at least one noise source"));
    }
    if !(quantum_floor.is_finite() && quantum_floor > 0.0) {
        return Err(Error::param(
            "quantum_floor",
            format!("must be finite and > 0, got {quantum_floor}"),
        ));
    }
    let floor = NoiseSource::new(NoiseKind::QuantumFloor, quantum_floor, 0.0)?;
    let mut rows = sources
        .iter()
        .chain(std::iter::once(&floor))
        .map(|s| {
            let timing_asd = s.timing_asd(omega0)?;
            Ok(BudgetRow {
                source: *s,
                timing_asd,
                ratio_to_quantum_floor: timing_asd / quantum_floor,
                dominant: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let top = rows
        .iter()
        .enumerate()
        .fold(0, |best, (i, r)| if r.timing_asd > rows[best].timing_asd { i } else { best });
    rows[top].dominant = true;

    let rss_total = rss_total.then(|| rows.iter().map(|r| r.timing_asd.powi(2)).sum::<f64>().sqrt());
    Ok(Budget {
        rows,
        quantum_floor,
        rss_total,
    })
}

/// Technical noise figures quoted for self-referenced, repetition-locked femtosecond combs:
/// 1e-5 rad/sqrt(Hz) carrier-envelope phase noise and 1e-18 s/sqrt(Hz) repetition jitter,
/// both at 100 kHz.
pub fn reference_sources() -> Vec<NoiseSource> {
    vec![
        NoiseSource::new(NoiseKind::CeoPhase, 1e-5, 1e5).expect("valid"),
        NoiseSource::new(NoiseKind::RepRateJitter, 1e-18, 1e5).expect("valid"),
    ]
}

fn noise_err(line: usize, message: impl Into<String>) -> Error {
    Error::NoiseInput {
        line,
        message: message.into(),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(line: usize, field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| noise_err(line, format!("{what} `{field}` is not a number")))
}

/// Parses `kind,amplitude,units,at_frequency_hz` rows (header required, `#` comments allowed).
pub fn parse_noise_csv(text: &str) -> Result<Vec<NoiseSource>> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, h)) if h == NOISE_CSV_HEADER => {}
        Some((n, h)) => return Err(noise_err(n, format!("expected header `{NOISE_CSV_HEADER}`, got `{h}`"))),
        None => return Err(noise_err(0, "empty noise file")),
    }
    lines
        .map(|(n, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [kind, amplitude, units, freq] = fields[..] else {
                return Err(noise_err(n, format!("expected 4 fields, got {}", fields.len())));
            };
            let kind: NoiseKind = kind.parse().map_err(|e: String| noise_err(n, e))?;
            if !kind.accepts_units(units) {
                return Err(noise_err(
                    n,
                    format!("units `{units}` do not match {kind} (expected {})", kind.native_units()),
                ));
            }
            NoiseSource::new(
                kind,
                number(n, amplitude, "amplitude")?,
                number(n, freq, "frequency")?,
            )
            .map_err(|e| noise_err(n, e.to_string()))
        })
        .collect()
}

pub fn write_noise_csv<W: Write>(sources: &[NoiseSource], mut out: W) -> io::Result<()> {
    writeln!(out, "{NOISE_CSV_HEADER}")?;
    for s in sources {
        writeln!(
            out,
            "{},{},{},{}",
            s.kind,
            sci(s.amplitude),
            s.kind.native_units(),
            sci(s.at_frequency)
        )?;
    }
    Ok(())
}

/// Measured ASD curve for one noise kind, interpolated log-log between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCurve {
    pub kind: NoiseKind,
    points: Vec<(f64, f64)>,
}

impl NoiseCurve {
    /// Parses `frequency_hz,asd` rows with strictly increasing positive frequencies.
    pub fn parse_csv(kind: NoiseKind, text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        match lines.next() {
            Some((_, h)) if h == CURVE_CSV_HEADER => {}
            Some((n, h)) => return Err(noise_err(n, format!("expected header `{CURVE_CSV_HEADER}`, got `{h}`"))),
            None => return Err(noise_err(0, "empty curve file")),
        }
        let mut points: Vec<(f64, f64)> = Vec::new();
        for (n, line) in lines {
            let (f, a) = line
                .split_once(',')
                .ok_or_else(|| noise_err(n, "expected `frequency_hz,asd`"))?;
            let (f, a) = (number(n, f, "frequency")?, number(n, a, "asd")?);
            if !(f > 0.0 && a > 0.0) {
                return Err(noise_err(n, "frequency and asd must be > 0 for log-log interpolation"));
            }
            if points.last().is_some_and(|&(prev, _)| f <= prev) {
                return Err(noise_err(n, "frequencies must be strictly increasing"));
            }
            points.push((f, a));
        }
        if points.is_empty() {
            return Err(noise_err(0, "curve has no samples"));
        }
        Ok(Self { kind, points })
    }

    /// ASD at `frequency`, clamped to the end values outside the sampled range.
    pub fn at(&self, frequency: f64) -> f64 {
        let pts = &self.points;
        if frequency <= pts[0].0 {
            return pts[0].1;
        }
        if frequency >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let hi = pts.partition_point(|&(f, _)| f < frequency);
        let ((f0, a0), (f1, a1)) = (pts[hi - 1], pts[hi]);
        let t = (frequency / f0).ln() / (f1 / f0).ln();
        (a0.ln() + t * (a1 / a0).ln()).exp()
    }

    pub fn source_at(&self, frequency: f64) -> Result<NoiseSource> {
        NoiseSource::new(self.kind, self.at(frequency), frequency)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::omega_from_wavelength;

    fn omega0() -> f64 {
        omega_from_wavelength(810e-9)
    }

    #[test]
    fn phase_noise_at_810_nm() {
        let t = phase_to_timing(1e-5, omega0()).unwrap();
        assert!((t - 4.3e-21).abs() < 0.05e-21, "{t}");
        assert!((t / 4e-21 - 1.0).abs() < 0.1);
        assert_eq!(phase_to_timing(0.0, omega0()).unwrap(), 0.0);
        let halved = phase_to_timing(1e-5, 2.0 * omega0()).unwrap();
        assert_eq!(halved, t / 2.0);
        assert!(phase_to_timing(1e-5, 0.0).is_err());
    }

    #[test]
    fn reference_budget_is_jitter_dominated() {
        let budget = build_budget(&reference_sources(), 2.1e-23, omega0(), false).unwrap();
        assert_eq!(budget.rows.len(), 3);
        assert_eq!(budget.dominant().source.kind, NoiseKind::RepRateJitter);
        assert_eq!(budget.rows.iter().filter(|r| r.dominant).count(), 1);
        let floor = budget.rows.last().unwrap();
        assert_eq!(floor.source.kind, NoiseKind::QuantumFloor);
        assert_eq!(floor.ratio_to_quantum_floor, 1.0);
    }

    #[test]
    fn single_and_zero_sources() {
        let one = [NoiseSource::new(NoiseKind::RepRateJitter, 1e-18, 1e5).unwrap()];
        let b = build_budget(&one, 1e-23, omega0(), false).unwrap();
        assert!(b.rows[0].dominant);

        let zeros = [
            NoiseSource::new(NoiseKind::CeoPhase, 0.0, 1e5).unwrap(),
            NoiseSource::new(NoiseKind::RepRateJitter, 0.0, 1e5).unwrap(),
        ];
        let b = build_budget(&zeros, 1e-23, omega0(), false).unwrap();
        assert_eq!(b.dominant().source.kind, NoiseKind::QuantumFloor);

        assert!(build_budget(&[], 1e-23, omega0(), false).is_err());
    }

    #[test]
    fn ties_go_to_the_first_listed_row() {
        let tied = [
            NoiseSource::new(NoiseKind::RepRateJitter, 1e-20, 1e5).unwrap(),
            NoiseSource::new(NoiseKind::RepRateJitter, 1e-20, 1e3).unwrap(),
        ];
        let b = build_budget(&tied, 1e-23, omega0(), false).unwrap();
        assert!(b.rows[0].dominant && !b.rows[1].dominant);
    }

    #[test]
    fn rss_total_row() {
        let b = build_budget(&reference_sources(), 2e-23, omega0(), true).unwrap();
        let want = b.rows.iter().map(|r| r.timing_asd.powi(2)).sum::<f64>().sqrt();
        assert_eq!(b.rss_total, Some(want));
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(BUDGET_CSV_HEADER));
        assert!(text.lines().last().unwrap().starts_with("rss_total,"));
        assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 1);
    }

    #[test]
    fn noise_csv_parsing() {
        let text = "# comb figures\nkind,amplitude,units,at_frequency_hz\nceo_phase,1e-5,rad/rtHz,1e5\nrep_rate_jitter,1e-18,s/rtHz,1e5\n";
        let sources = parse_noise_csv(text).unwrap();
        assert_eq!(sources, reference_sources());

        let mut buf = Vec::new();
        write_noise_csv(&sources, &mut buf).unwrap();
        assert_eq!(parse_noise_csv(&String::from_utf8(buf).unwrap()).unwrap(), sources);

        let bad_units = "kind,amplitude,units,at_frequency_hz\nceo_phase,1e-5,s/rtHz,1e5\n";
        assert!(matches!(
            parse_noise_csv(bad_units),
            Err(Error::NoiseInput { line: 2, .. })
        ));
        let bad_kind = "kind,amplitude,units,at_frequency_hz\nthermal,1,s/rtHz,1\n";
        assert!(parse_noise_csv(bad_kind).is_err());
        assert!(parse_noise_csv("a,b\n").is_err());
    }

    #[test]
    fn curve_interpolates_log_log() {
        let text = "frequency_hz,asd\n1e3,1e-16\n1e5,1e-18\n";
        let curve = NoiseCurve::parse_csv(NoiseKind::RepRateJitter, text).unwrap();
        assert!((curve.at(1e4) / 1e-17 - 1.0).abs() < 1e-12);
        assert_eq!(curve.at(10.0), 1e-16);
        assert_eq!(curve.at(1e7), 1e-18);
        let s = curve.source_at(1e5).unwrap();
        assert_eq!(s.amplitude, 1e-18);
        assert!(NoiseCurve::parse_csv(NoiseKind::CeoPhase, "frequency_hz,asd\n10,1\n5,1\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn phase_timing_round_trip(phase in 0.0f64..1e-2, lambda in 300e-9f64..3e-6) {
            let w = omega_from_wavelength(lambda);
            let back = timing_to_phase(phase_to_timing(phase, w).unwrap(), w).unwrap();
            proptest::prop_assert!((back - phase).abs() <= 1e-12 * phase);
        }

        #[test]
        fn dominance_survives_uniform_rescaling(
            a in 0.0f64..1e-17, b in 0.0f64..1e-17, q in 1e-24f64..1e-20, k in 1e-3f64..1e3
        ) {
            let w = omega0();
            let src = |s: f64| vec![
                NoiseSource::new(NoiseKind::RepRateJitter, a * s, 1e5).unwrap(),
                NoiseSource::new(NoiseKind::QuantumFloor, b * s, 1e5).unwrap(),
            ];
            let base = build_budget(&src(1.0), q, w, false).unwrap();
            let scaled = build_budget(&src(k), q * k, w, false).unwrap();
            let pick = |bud: &Budget| bud.rows.iter().position(|r| r.dominant).unwrap();
            proptest::prop_assert_eq!(pick(&base), pick(&scaled));
        }
    }
}
