// Comb noise figures converted to timing noise and set against the quantum floor.
//
// ```text
// cargo run --example noise_budget
// ```

use qtiming::constants::omega_from_wavelength;
use qtiming::homodyne::{sql_combined, sql_tof};
use qtiming::noise_budget::{build_budget, parse_noise_csv};

const NOISE: &str = "\
kind,amplitude,units,at_frequency_hz
ceo_phase,1e-5,rad/rtHz,1e5
rep_rate_jitter,1e-18,s/rtHz,1e5
";

pub fn run_example() -> qtiming::Result<()> {
    let omega0 = omega_from_wavelength(810e-9);
    let n = 4.0776e16;
    let delta_omega = 1.1774e14;
    let sources = parse_noise_csv(NOISE)?;

    for (label, floor) in [
        ("combined", sql_combined(n, omega0, delta_omega)),
        ("time-of-flight", sql_tof(n, delta_omega)),
    ] {
        println!("floor: {label} limit {floor:.3e} s/rtHz");
        let budget = build_budget(&sources, floor, omega0, true)?;
        budget.write_csv(std::io::stdout().lock())?;
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
