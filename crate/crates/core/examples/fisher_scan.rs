// Fisher information of one homodyne outcome as the LO is rotated from i v0 (phase)
// to v1 (envelope). The peak sits at the w1 angle atan(1/alpha).
//
// ```text
// cargo run --example fisher_scan
// ```

use std::sync::Arc;

use qtiming::estimation::{argmax, is_unimodal, lo_optimality_scan};
use qtiming::homodyne::LoShape;
use qtiming::mode_lab::{build_basis, make_grid, PulseSpec};
use qtiming::quantum_state::coherent_state;

pub fn run_example() -> qtiming::Result<()> {
    let spec = PulseSpec::reference();
    let basis = Arc::new(build_basis(&spec, &make_grid(&spec, 40.0, 1 << 14)?)?);
    let signal = coherent_state(basis.clone(), spec.photon_number, 0.0)?;

    let scan = lo_optimality_scan(&signal, 256)?;
    let peak = &scan[argmax(&scan).expect("non-empty scan")];
    println!("w1 angle       {:.6} rad", LoShape::timing_angle(&basis));
    println!("scan peak      {:.6} rad", peak.lo.mixing_angle);
    println!("CRB at peak    {:.6e} s", peak.crb);
    println!("CRB at i v0    {:.6e} s", scan[0].crb);
    println!("CRB at v1      {:.6e} s", scan[scan.len() - 1].crb);
    println!("unimodal       {}", is_unimodal(&scan));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
