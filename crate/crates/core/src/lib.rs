//! Quantum-limited time transfer with pulsed light.
//!
//! A delayed pulse `v0(u - du)` differs from the reference pulse by `(du/u0) w1` to first
//! order, where `w1` mixes a phase component (`i v0`) with an envelope-derivative
//! component (`v1`). Reading `w1` with a strong balanced-homodyne local oscillator gives
//! the combined limit `du_min = 1 / (2 sqrt(N) sqrt(omega0^2 + delta_omega^2))`, below both
//! the time-of-flight and the phase limits, and squeezing `P0` and `Q1` lowers it further.
//!
//! | module | contents |
//! |---|---|
//! | [`mode_lab`] | time grids, envelopes, spectral width, `v0`/`v1`/`w1`, exact shifts |
//! | [`quantum_state`] | photon budget, coherent and squeezed quadrature states |
//! | [`homodyne`] | mean signal, variance, SNR and the tof/phase/combined/squeezed limits |
//! | [`estimation`] | Fisher information, LO optimality scan, Monte Carlo estimation |
//! | [`noise_budget`] | technical noise converted to timing ASD next to the quantum floor |
//! | [`cli`] | scenario files and the `qtiming` command-line front end |

// `!(x < bound)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod estimation;
pub mod format;
pub mod homodyne;
pub mod mode_lab;
pub mod noise_budget;
pub mod quantum_state;

pub use error::{Error, Result};
