use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::omega_from_wavelength;
use crate::error::{Error, Result};
use crate::quantum_state::photons_from_power;

/// Envelope family of the emitted pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Envelope {
    Gaussian,
    Sech,
}

impl Envelope {
    /// Width parameter `tau` such that the intensity `|g0|^2` has the given FWHM.
    ///
    /// Gaussian: `|g0|^2 ~ exp(-u^2/tau^2)`. Sech: `|g0|^2 ~ sech^2(u/tau)`.
    pub fn tau(self, duration_fwhm: f64) -> f64 {
        match self {
            Envelope::Gaussian => duration_fwhm / (2.0 * std::f64::consts::LN_2.sqrt()),
            Envelope::Sech => duration_fwhm / (2.0 * std::f64::consts::SQRT_2.acosh()),
        }
    }

    /// Unnormalized amplitude at `u` for width parameter `tau`.
    pub fn amplitude(self, u: f64, tau: f64) -> f64 {
        let x = u / tau;
        match self {
            Envelope::Gaussian => (-0.5 * x * x).exp(),
            Envelope::Sech => 1.0 / x.cosh(),
        }
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Envelope::Gaussian => "gaussian",
            Envelope::Sech => "sech",
        })
    }
}

impl FromStr for Envelope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(Envelope::Gaussian),
            "sech" => Ok(Envelope::Sech),
            other => Err(format!("unknown envelope `{other}` (expected gaussian or sech)")),
        }
    }
}

/// Physical description of the emitted pulse train for one detection window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Carrier angular frequency, rad/s.
    pub omega0: f64,
    pub envelope: Envelope,
    /// Intensity full width at half maximum, s.
    pub duration_fwhm: f64,
    /// Mean photon number collected in the detection window.
    pub photon_number: f64,
    /// Global phase, rad.
    pub theta: f64,
}

impl PulseSpec {
    pub fn new(
        omega0: f64,
        envelope: Envelope,
        duration_fwhm: f64,
        photon_number: f64,
        theta: f64,
    ) -> Result<Self> {
        positive("omega0", omega0)?;
        positive("duration_fwhm", duration_fwhm)?;
        positive("photon_number", photon_number)?;
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        Ok(Self {
            omega0,
            envelope,
            duration_fwhm,
            photon_number,
            theta,
        })
    }

    /// Builds the spec from average power and detection time, `N = P T / (hbar omega0)`.
    pub fn from_power(
        wavelength_m: f64,
        envelope: Envelope,
        duration_fwhm: f64,
        power_w: f64,
        detection_time_s: f64,
        theta: f64,
    ) -> Result<Self> {
        positive("wavelength", wavelength_m)?;
        let omega0 = omega_from_wavelength(wavelength_m);
        let n = photons_from_power(power_w, detection_time_s, omega0)?;
        Self::new(omega0, envelope, duration_fwhm, n, theta)
    }

    /// 10 mW at 810 nm, 10 fs gaussian pulses, 1 s detection window.
    pub fn reference() -> Self {
        Self::from_power(810e-9, Envelope::Gaussian, 10e-15, 10e-3, 1.0, 0.0)
            .expect("reference pulse parameters are valid")
    }

    pub fn tau(&self) -> f64 {
        self.envelope.tau(self.duration_fwhm)
    }

    pub fn with_duration(mut self, duration_fwhm: f64) -> Self {
        self.duration_fwhm = duration_fwhm;
        self
    }

    pub fn with_photon_number(mut self, photon_number: f64) -> Self {
        self.photon_number = photon_number;
        self
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {value}")))
    }
}
