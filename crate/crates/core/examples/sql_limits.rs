// Time-of-flight, phase and combined limits for 10 mW of 810 nm light in one second,
// and how they move with pulse duration.
//
// ```text
// cargo run --example sql_limits
// ```

use qtiming::homodyne::{sql_combined, sql_phase, sql_tof};
use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};

pub fn run_example() -> qtiming::Result<()> {
    let reference = PulseSpec::reference();
    println!("N = {:.4e} photons", reference.photon_number);
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "fwhm [fs]", "alpha", "tof [s]", "phase [s]", "combined [s]");
    for fwhm_fs in [5.0, 10.0, 30.0, 100.0] {
        let spec = reference.with_duration(fwhm_fs * 1e-15);
        let n_points = if fwhm_fs > 30.0 { 1 << 16 } else { 1 << 14 };
        let basis = build_basis(&spec, &make_grid(&spec, 40.0, n_points)?)?;
        let n = spec.photon_number;
        println!(
            "{fwhm_fs:>10} {:>12.3} {:>12.4e} {:>12.4e} {:>12.4e}",
            basis.alpha,
            sql_tof(n, basis.delta_omega),
            sql_phase(n, basis.omega0()),
            sql_combined(n, basis.omega0(), basis.delta_omega),
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
