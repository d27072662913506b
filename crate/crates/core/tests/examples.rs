mod timing_mode {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/timing_mode.rs"));
}

mod sql_limits {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sql_limits.rs"));
}

mod homodyne_signal {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/homodyne_signal.rs"));
}

mod squeezing_gain {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/squeezing_gain.rs"));
}

mod fisher_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fisher_scan.rs"));
}

mod monte_carlo {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monte_carlo.rs"));
}

mod noise_budget {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/noise_budget.rs"));
}

mod scenario_config {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenario_config.rs"));
}

#[test]
fn timing_mode_example_runs() {
    timing_mode::run_example().expect("timing_mode example should run");
}

#[test]
fn sql_limits_example_runs() {
    sql_limits::run_example().expect("sql_limits example should run");
}

#[test]
fn homodyne_signal_example_runs() {
    homodyne_signal::run_example().expect("homodyne_signal example should run");
}

#[test]
fn squeezing_gain_example_runs() {
    squeezing_gain::run_example().expect("squeezing_gain example should run");
}

#[test]
fn fisher_scan_example_runs() {
    fisher_scan::run_example().expect("fisher_scan example should run");
}

#[test]
fn monte_carlo_example_runs() {
    monte_carlo::run_example().expect("monte_carlo example should run");
}

#[test]
fn noise_budget_example_runs() {
    noise_budget::run_example().expect("noise_budget example should run");
}

#[test]
fn scenario_config_example_runs() {
    scenario_config::run_example().expect("scenario_config example should run");
}
