// Balanced homodyne readout of a delayed coherent pulse with a w1-shaped local
// oscillator: linearized mean against the exact grid overlap, and the SNR.
//
// ```text
// cargo run --example homodyne_signal
// ```

use std::sync::Arc;

use qtiming::homodyne::{mean_signal, mean_signal_overlap, min_resolvable_delay, snr_at, HomodyneConfig, LoShape};
use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};
use qtiming::quantum_state::coherent_state;

pub fn run_example() -> qtiming::Result<()> {
    let spec = PulseSpec::reference();
    let basis = Arc::new(build_basis(&spec, &make_grid(&spec, 40.0, 1 << 14)?)?);
    let signal = coherent_state(basis.clone(), spec.photon_number, 0.0)?;
    let lo = HomodyneConfig::from_shape(basis, LoShape::Timing, 0.0, 1e18)?;

    let floor = min_resolvable_delay(&signal, &lo)?;
    println!("unit-SNR delay: {floor:.4e} s");
    let offset = mean_signal(&signal, &lo, 0.0)?;
    println!("\n{:>10} {:>16} {:>16} {:>10}", "du [s]", "linear - D(0)", "exact - D(0)", "SNR");
    for du in [1e-24, 1e-22, 1e-20, 1e-18] {
        let linear = mean_signal(&signal, &lo, du)? - offset;
        let exact = mean_signal_overlap(&signal, &lo, du)? - offset;
        println!("{du:>10.0e} {linear:>16.6e} {exact:>16.6e} {:>10.3e}", snr_at(&signal, &lo, du)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
