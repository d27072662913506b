use std::io::{self, Write};

use num_complex::Complex64;

use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::format::sci;

/// Tolerance on the grid norm of modes treated as orthonormal.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-10;

/// CSV header of a single-mode dump.
pub const MODE_CSV_HEADER: &str = "t_seconds,re_amplitude,im_amplitude";

/// Complex mode function sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    pub grid: TimeGrid,
    pub amplitude: Vec<Complex64>,
    pub label: String,
}

impl SampledMode {
    pub fn new(grid: TimeGrid, amplitude: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if amplitude.len() != grid.n_points {
            return Err(Error::InvalidGrid(format!(
                "amplitude has {} samples, grid has {}",
                amplitude.len(),
                grid.n_points
            )));
        }
        Ok(Self {
            grid,
            amplitude,
            label: label.into(),
        })
    }

    pub fn from_fn(grid: TimeGrid, label: impl Into<String>, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            amplitude: grid.times().map(f).collect(),
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    /// `sum |a|^2 dt`
    pub fn norm_sqr(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.t_step
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other> = sum conj(self) other dt`
    pub fn inner(&self, other: &SampledMode) -> Complex64 {
        debug_assert_eq!(self.grid, other.grid);
        self.amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.t_step
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                norm,
                tolerance: UNIT_NORM_TOLERANCE,
            });
        }
        let inv = 1.0 / norm;
        self.amplitude.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    pub fn check_unit_norm(&self, tolerance: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() <= tolerance {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm, tolerance })
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        self.map(|_, a| a * factor)
    }

    /// `self + factor * other`, keeping this mode's label.
    pub fn add_scaled(&self, factor: Complex64, other: &SampledMode) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let amplitude = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| a + factor * b)
            .collect();
        Self {
            grid: self.grid,
            amplitude,
            label: self.label.clone(),
        }
    }

    /// Applies `f(u, a)` to every sample.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let amplitude = self
            .grid
            .times()
            .zip(&self.amplitude)
            .map(|(u, &a)| f(u, a))
            .collect();
        Self {
            grid: self.grid,
            amplitude,
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Grid L2 norm of `self - other`.
    pub fn distance(&self, other: &SampledMode) -> f64 {
        let sum: f64 = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (sum * self.grid.t_step).sqrt()
    }

    pub fn max_abs_diff(&self, other: &SampledMode) -> f64 {
        self.amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Writes `t_seconds,re_amplitude,im_amplitude` rows, one per grid point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{MODE_CSV_HEADER}")?;
        for (u, a) in self.grid.times().zip(&self.amplitude) {
            writeln!(out, "{},{},{}", sci(u), sci(a.re), sci(a.im))?;
        }
        Ok(())
    }
}
