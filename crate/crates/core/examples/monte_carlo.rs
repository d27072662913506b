// Seeded Monte Carlo of the homodyne estimator, coherent and 10 dB squeezed. The
// spread of the estimates tracks the analytic bound.
//
// ```text
// cargo run --release --example monte_carlo
// ```

use std::sync::Arc;

use qtiming::estimation::run_monte_carlo;
use qtiming::homodyne::{HomodyneConfig, LoShape};
use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};
use qtiming::quantum_state::{apply_squeezing, coherent_state, SqueezingSpec};

pub fn run_example() -> qtiming::Result<()> {
    let spec = PulseSpec::reference();
    let basis = Arc::new(build_basis(&spec, &make_grid(&spec, 40.0, 1 << 14)?)?);
    let lo = HomodyneConfig::from_shape(basis.clone(), LoShape::Timing, 0.0, 1e18)?;
    let coherent = coherent_state(basis, spec.photon_number, 0.0)?;
    let squeezed = apply_squeezing(&coherent, &SqueezingSpec::equal(SqueezingSpec::r_from_db(10.0))?);

    let truth = 2e-24;
    for (name, state, seed) in [("coherent", &coherent, 11), ("10 dB", &squeezed, 12)] {
        let report = run_monte_carlo(state, &lo, truth, 50_000, seed)?;
        println!(
            "{name:>9}: mean {:.4e} s  std {:.4e} s  bound {:.4e} s  std/bound {:.4}",
            report.estimator_mean,
            report.estimator_std,
            report.analytic_bound,
            report.estimator_std / report.analytic_bound
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
