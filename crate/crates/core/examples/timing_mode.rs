// Builds the v0 / v1 / w1 basis for the reference pulse and shows that a small delay
// lands in w1 with amplitude du/u0, with an error that falls off quadratically.
//
// ```text
// cargo run --example timing_mode
// ```

use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};

pub fn run_example() -> qtiming::Result<()> {
    let spec = PulseSpec::reference();
    let grid = make_grid(&spec, 40.0, 1 << 14)?;
    let basis = build_basis(&spec, &grid)?;

    println!("omega0      = {:.6e} rad/s", basis.omega0());
    println!("delta_omega = {:.6e} rad/s", basis.delta_omega);
    println!("alpha       = {:.4}", basis.alpha);
    println!("u0          = {:.6e} s", basis.u0);
    println!("<v0|v1>     = {:.2e}", basis.v0.inner(&basis.v1).norm());

    println!("\n{:>10} {:>14} {:>14} {:>12}", "du [s]", "Re proj", "du/u0", "residual");
    for du in [1e-19, 1e-18, 1e-17] {
        let proj = basis.project_shift(du)?;
        let residual = basis.expansion_residual(du)?;
        println!("{du:>10.1e} {:>14.6e} {:>14.6e} {residual:>12.3e}", proj.re, du / basis.u0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
