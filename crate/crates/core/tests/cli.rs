//! Golden-file and behavior tests for the `qtiming` binary.
//!
//! Set `QTIMING_UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qtiming::estimation::read_outcomes_le;

const GOLDEN_REL_TOL: f64 = 1e-9;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn golden_dir() -> PathBuf {
    manifest().join("tests/golden")
}

fn qtiming(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qtiming"));
    cmd.current_dir(manifest()).args(args).env_remove("QTIMING_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("qtiming runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = qtiming(args, &[]);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn tokens_match(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => (x - y).abs() <= GOLDEN_REL_TOL * x.abs().max(y.abs()) || (x - y).abs() < 1e-300,
        _ => false,
    }
}

fn split_tokens(text: &str) -> Vec<&str> {
    text.split([',', '\n', ' ', '"', ':'])
        .filter(|t| !t.is_empty())
        .collect()
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("QTIMING_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    let (e, a) = (split_tokens(&expected), split_tokens(actual));
    assert_eq!(e.len(), a.len(), "{name}: token count differs");
    for (i, (x, y)) in e.iter().zip(&a).enumerate() {
        assert!(tokens_match(x, y), "{name}: token {i} differs: expected {x}, got {y}");
    }
}

const SMALL: &str = "tests/golden/small.ini";

#[test]
fn golden_sql() {
    check_golden("sql.json", &stdout_ok(&["sql", "--config", SMALL]));
}

#[test]
fn golden_fisher() {
    check_golden("fisher.csv", &stdout_ok(&["fisher", "--config", SMALL]));
}

#[test]
fn golden_simulate() {
    check_golden("simulate.json", &stdout_ok(&["simulate", "--config", SMALL]));
}

#[test]
fn golden_budget() {
    check_golden("budget.csv", &stdout_ok(&["budget", "--config", SMALL]));
}

#[test]
fn golden_modes_diagnostics() {
    check_golden("modes.json", &stdout_ok(&["modes", "--config", SMALL, "--format", "json"]));
}

#[test]
fn reference_sql_record() {
    let text = stdout_ok(&["sql", "--config", "scenarios/reference.ini"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let tof = v["sql_tof"].as_f64().unwrap();
    let combined = v["sql_combined"].as_f64().unwrap();
    assert!((tof / 2.1e-23 - 1.0).abs() < 0.01);
    assert!((combined / 1.1e-24 - 1.0).abs() < 0.05);
    assert!(v["note"].as_str().unwrap().contains("sql_tof"));
}

#[test]
fn long_pulse_reaches_phase_limit() {
    let text = stdout_ok(&["sql", "--config", "scenarios/long_pulse.ini"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let (combined, phase) = (v["sql_combined"].as_f64().unwrap(), v["sql_phase"].as_f64().unwrap());
    assert!((combined / phase - 1.0).abs() < 1e-9);
}

#[test]
fn squeezing_halves_the_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.ini");
    std::fs::write(&path, format!("[squeezing]\nr_phase_v0 = {0}\nr_amp_v1 = {0}\n[grid]\nn_points = 8192\n", 2f64.ln())).unwrap();
    let text = stdout_ok(&["sql", "--config", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ratio = v["sql_squeezed"].as_f64().unwrap() / v["sql_combined"].as_f64().unwrap();
    assert!((ratio - 0.5).abs() < 1e-15);
}

#[test]
fn modes_csv_to_stdout_and_directory() {
    let text = stdout_ok(&["modes", "--config", SMALL]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mode,t_seconds,re_amplitude,im_amplitude"));
    assert_eq!(lines.count(), 3 * 16384);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("modes");
    stdout_ok(&["modes", "--config", SMALL, "--out", out.to_str().unwrap()]);
    for name in ["v0.csv", "v1.csv", "w1.csv"] {
        let body = std::fs::read_to_string(out.join(name)).unwrap();
        assert!(body.starts_with("t_seconds,re_amplitude,im_amplitude\n"));
        assert_eq!(body.lines().count(), 16385);
    }
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let dump = |threads: &str| {
        let path = dir.path().join(format!("out{threads}.bin"));
        let out = qtiming(
            &["simulate", "--config", SMALL, "--dump-outcomes", path.to_str().unwrap()],
            &[("QTIMING_THREADS", threads)],
        );
        assert!(out.status.success());
        (String::from_utf8(out.stdout).unwrap(), std::fs::read(&path).unwrap())
    };
    let (r1, b1) = dump("1");
    let (r4, b4) = dump("4");
    assert_eq!(r1, r4);
    assert_eq!(b1, b4);
    assert_eq!(read_outcomes_le(&b1).len(), 2000);
}

#[test]
fn seed_flag_overrides_scenario() {
    let a = stdout_ok(&["simulate", "--config", SMALL, "--seed", "99"]);
    let b = stdout_ok(&["simulate", "--config", SMALL]);
    assert_ne!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"].as_u64(), Some(99));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("budget.csv");
    let stdout = stdout_ok(&["budget", "--config", SMALL, "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let body = std::fs::read_to_string(path).unwrap();
    assert!(body.starts_with("kind,timing_asd_s_per_rtHz,ratio_to_quantum_floor,dominant\n"));
}

#[test]
fn schema_lists_columns_and_keys() {
    let text = stdout_ok(&["--schema"]);
    assert!(text.contains("chi_rad,fisher_info_per_s2,crb_s"));
    assert!(text.contains("kind,timing_asd_s_per_rtHz,ratio_to_quantum_floor,dominant"));
    assert!(text.contains("[run] seed = 0"));
}

fn error_json(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON record")
}

#[test]
fn unknown_key_fails_with_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.ini");
    std::fs::write(&path, "[pulse]\nwavelength_nm = 810\nduration_fs = 10\n").unwrap();
    let v = error_json(&qtiming(&["sql", "--config", path.to_str().unwrap()], &[]));
    assert_eq!(v["error"], "config");
    assert_eq!(v["line"], 3);
    assert_eq!(v["key"], "duration_fs");
}

#[test]
fn bad_noise_units_fail_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noise.csv");
    std::fs::write(&path, "kind,amplitude,units,at_frequency_hz\nrep_rate_jitter,1e-18,rad/rtHz,1e5\n").unwrap();
    let v = error_json(&qtiming(&["budget", "--config", SMALL, "--noise", path.to_str().unwrap()], &[]));
    assert_eq!(v["error"], "noise_input");
    assert_eq!(v["line"], 2);
}

#[test]
fn singular_estimator_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quadrature.ini");
    std::fs::write(&path, "[lo]\ntheta_lo_rad = 1.5707963267948966\n[grid]\nn_points = 8192\n[run]\nn_trials = 100\n").unwrap();
    let v = error_json(&qtiming(&["simulate", "--config", path.to_str().unwrap()], &[]));
    assert_eq!(v["error"], "singular_estimator");
}

#[test]
fn usage_errors_are_json() {
    let v = error_json(&qtiming(&["transmogrify"], &[]));
    assert_eq!(v["error"], "usage");
    let v = error_json(&qtiming(&["--format", "xml", "sql"], &[]));
    assert_eq!(v["error"], "usage");
}

#[test]
fn missing_config_file_is_io_error() {
    let v = error_json(&qtiming(&["sql", "--config", "does/not/exist.ini"], &[]));
    assert_eq!(v["error"], "io");
}

#[test]
fn golden_files_exist() {
    for name in ["sql.json", "fisher.csv", "simulate.json", "budget.csv", "modes.json"] {
        assert!(Path::new(&golden_dir().join(name)).exists(), "{name}");
    }
}
