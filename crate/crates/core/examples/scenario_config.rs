// Drives the command-line front end from a scenario string, the same way the `qtiming`
// binary does from a file.
//
// ```text
// cargo run --example scenario_config
// ```

use qtiming::cli::{cmd_sql, run, Scenario};

const SCENARIO: &str = "
[pulse]
wavelength_nm = 1550
envelope = sech
duration_fwhm_fs = 50
power_w = 0.001

[squeezing]
r_db = 6

[grid]
n_points = 16384
";

pub fn run_example() -> qtiming::Result<()> {
    let scenario = Scenario::parse(SCENARIO)?;
    let report = cmd_sql(&scenario)?;
    println!("1550 nm sech, 1 mW: combined {:.4e} s, squeezed {:.4e} s", report.sql_combined, report.sql_squeezed);

    // A typo is a hard error that names the line and key.
    let err = Scenario::parse("[pulse]\nwavelength = 800\n").unwrap_err();
    println!("rejected: {err}");

    let dir = std::env::temp_dir().join(format!("qtiming-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("telecom.ini");
    std::fs::write(&path, SCENARIO)?;
    let mut stdout = std::io::stdout();
    let status = run(
        ["qtiming", "sql", "--format", "csv", "--config", path.to_str().expect("utf-8 path")],
        &mut stdout,
        &mut std::io::stderr(),
    );
    std::fs::remove_dir_all(&dir)?;
    println!("exit status {status}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtiming::Result<()> {
    run_example()
}
