// Squeezing the phase quadrature of v0 and the amplitude quadrature of v1 lowers the
// unit-SNR delay by e^{-r}.
//
// ```text
// cargo run --example squeezing_gain
// ```

use std::sync::Arc;

use qtiming::homodyne::{min_resolvable_delay, HomodyneConfig, LoShape};
use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};
use qtiming::quantum_state::{apply_squeezing, coherent_state, SqueezingSpec};

pub fn run_example() -> qtiming::Result<()> {
    let spec = PulseSpec::reference();
    let basis = Arc::new(build_basis(&spec, &make_grid(&spec, 40.0, 1 << 14)?)?);
    let coherent = coherent_state(basis.clone(), spec.photon_number, 0.0)?;
    let lo = HomodyneConfig::from_shape(basis, LoShape::Timing, 0.0, 1e18)?;
    let base = min_resolvable_delay(&coherent, &lo)?;

    println!("{:>6} {:>8} {:>14} {:>8}", "dB", "r", "du_min [s]", "gain");
    for db in [0.0, 3.0, 6.0, 10.0, 15.0] {
        let r = SqueezingSpec::r_from_db(db);
        let squeezed = apply_squeezing(&coherent, &SqueezingSpec::equal(r)?);
        let du = min_resolvable_delay(&squeezed, &lo)?;
        println!("{db:>6} {r:>8.4} {du:>14.4e} {:>8.4}", base / du);
    }

    // Squeezing only the v1 amplitude barely helps: the phase term carries alpha^2 of the weight.
    let envelope_only = apply_squeezing(&coherent, &SqueezingSpec::new(0.0, SqueezingSpec::r_from_db(10.0))?);
    println!("\nv1-only 10 dB gain: {:.5}", base / min_resolvable_delay(&envelope_only, &lo)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
