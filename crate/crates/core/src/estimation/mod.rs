//! Optimality checks and calibration: Fisher information of the homodyne outcome, the
//! LO-mode optimality scan and seeded Monte Carlo estimation of the delay.

mod fisher;
mod monte_carlo;

pub use fisher::{
    argmax, fisher_info, is_unimodal, lo_optimality_scan, lo_scan, scan_angles, FisherResult,
    LoDescription, MIN_SCAN_ANGLES,
};
pub use monte_carlo::{
    estimate_delay, read_outcomes_le, run_monte_carlo, simulate_shots, write_outcomes_le,
    MonteCarloReport, ShotRecord, CHUNK_TRIALS, GENERATOR,
};
