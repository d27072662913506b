use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homodyne::{mean_signal, min_resolvable_delay, timing_slope, variance_signal, HomodyneConfig};
use crate::quantum_state::FieldState;

/// Trials per independently seeded stream. Fixed so results do not depend on thread count.
pub const CHUNK_TRIALS: usize = 1 << 14;

/// Identity of the sampler written into every report.
pub const GENERATOR: &str = "chacha20(seed, stream=chunk_index)/standard_normal_ziggurat";

const SINGULAR_LIMIT: f64 = 1e-6;

/// Simulated homodyne outcomes for one delay.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub outcomes: Vec<f64>,
    pub delta_u: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub n_trials: usize,
    pub true_delta_u: f64,
    pub estimator_mean: f64,
    pub estimator_std: f64,
    pub analytic_bound: f64,
    pub seed: u64,
    pub generator: String,
}

impl MonteCarloReport {
    /// Per-trial estimator variance times the number of trials is the variance of one
    /// estimate; this is `estimator_std^2`.
    pub fn single_shot_variance(&self) -> f64 {
        self.estimator_std * self.estimator_std
    }

    /// Standard error of `estimator_mean`.
    pub fn standard_error(&self) -> f64 {
        self.estimator_std / (self.n_trials as f64).sqrt()
    }
}

/// I.i.d. Gaussian outcomes with the homodyne mean at `delta_u` and the strong-LO variance.
///
/// Trials are split into chunks of [`CHUNK_TRIALS`]; chunk `k` draws from ChaCha20 seeded with
/// `seed` on stream `k`, so any worker count yields the same array.
pub fn simulate_shots(
    signal: &FieldState,
    cfg: &HomodyneConfig,
    delta_u: f64,
    n_trials: usize,
    seed: u64,
) -> Result<ShotRecord> {
    if n_trials == 0 {
        return Err(Error::param("n_trials", "must be >= 1"));
    }
    let mean = mean_signal(signal, cfg, delta_u)?;
    let sigma = variance_signal(signal, cfg)?.sqrt();
    let mut outcomes = vec![0.0; n_trials];
    outcomes
        .par_chunks_mut(CHUNK_TRIALS)
        .enumerate()
        .for_each(|(chunk, out)| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            for x in out {
                let z: f64 = rng.sample(StandardNormal);
                *x = mean + sigma * z;
            }
        });
    Ok(ShotRecord {
        outcomes,
        delta_u,
        seed,
    })
}

/// Inverts the linear mean signal shot by shot and aggregates the estimates.
pub fn estimate_delay(
    record: &ShotRecord,
    signal: &FieldState,
    cfg: &HomodyneConfig,
) -> Result<MonteCarloReport> {
    let n = record.outcomes.len();
    if n < 2 {
        return Err(Error::param("n_trials", "need at least 2 outcomes for a spread"));
    }
    let factor = (signal.theta - cfg.theta_lo).cos();
    if factor.abs() < SINGULAR_LIMIT {
        return Err(Error::SingularEstimator { factor });
    }
    let slope = timing_slope(signal, cfg)?;
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::SingularEstimator { factor: 0.0 });
    }
    let offset = mean_signal(signal, cfg, 0.0)?;

    let estimates = record.outcomes.iter().map(|d| (d - offset) / slope);
    let mean = estimates.clone().sum::<f64>() / n as f64;
    let var = estimates.map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64;

    Ok(MonteCarloReport {
        n_trials: n,
        true_delta_u: record.delta_u,
        estimator_mean: mean,
        estimator_std: var.sqrt(),
        analytic_bound: min_resolvable_delay(signal, cfg)?,
        seed: record.seed,
        generator: GENERATOR.to_owned(),
    })
}

/// [`simulate_shots`] followed by [`estimate_delay`].
pub fn run_monte_carlo(
    signal: &FieldState,
    cfg: &HomodyneConfig,
    delta_u: f64,
    n_trials: usize,
    seed: u64,
) -> Result<MonteCarloReport> {
    let record = simulate_shots(signal, cfg, delta_u, n_trials, seed)?;
    estimate_delay(&record, signal, cfg)
}

/// Raw outcomes as consecutive little-endian f64 values.
pub fn write_outcomes_le<W: Write>(outcomes: &[f64], mut out: W) -> io::Result<()> {
    for x in outcomes {
        out.write_all(&x.to_le_bytes())?;
    }
    out.flush()
}

pub fn read_outcomes_le(bytes: &[u8]) -> Vec<f64> {
    bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect()
}
