//! `qtiming` command-line front end.
//!
//! Every command reads one scenario file (see [`scenario`]), runs one analysis and writes
//! CSV or JSON to stdout or `--out`. Failures print a JSON error record on stderr and exit
//! with a nonzero status.

pub mod commands;
pub mod scenario;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::estimation::write_outcomes_le;
use crate::format::{sci, to_json};
use crate::homodyne::write_sweep_csv;
use crate::mode_lab::MODE_CSV_HEADER;

pub use commands::{
    cmd_budget, cmd_fisher, cmd_modes, cmd_simulate, cmd_sql, mode_diagnostics, sql_sweep,
    BudgetReport, FisherScan, FisherSummary, ModeDiagnostics, SqlReport,
};
pub use scenario::{Scenario, SweepParam, SCENARIO_KEYS};

pub const FISHER_CSV_HEADER: &str = "chi_rad,fisher_info_per_s2,crb_s";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qtiming", version, about = "Quantum-limited pulse timing: limits, modes, Fisher scans, Monte Carlo and noise budgets")]
pub struct Cli {
    /// Scenario file (`key = value` under `[section]` headers); defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (a directory for `modes --format csv`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Overrides `[run] seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print output columns and scenario keys, then exit.
    #[arg(long, global = true)]
    pub schema: bool,
    /// Worker cap for parallel sections (0 = all cores).
    #[arg(long, global = true, env = "QTIMING_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time-of-flight, phase, combined and squeezed limits (or a sweep with `--format csv`).
    Sql,
    /// Sampled v0, v1 and w1 modes.
    Modes,
    /// Fisher information over LO mixing angles.
    Fisher,
    /// Monte Carlo homodyne estimation.
    Simulate {
        /// Write raw outcomes as little-endian f64.
        #[arg(long)]
        dump_outcomes: Option<PathBuf>,
    },
    /// Technical noise next to the quantum floor.
    Budget {
        /// Noise CSV (`kind,amplitude,units,at_frequency_hz`); overrides `[run] noise_csv`.
        #[arg(long)]
        noise: Option<PathBuf>,
    },
}

pub fn schema() -> String {
    let mut s = String::from(
        "# outputs (floats in 17-significant-digit scientific notation)\n\
         sql      json  photon_number, omega0 [rad/s], delta_omega [rad/s], alpha, u0 [s], sql_tof [s], sql_phase [s], sql_combined [s], sql_squeezed [s], r_phase_v0, r_amp_v1, min_resolvable_delay [s], lo_mode, note\n\
         sql      csv   quantity,value (one row per json number) or, with [run] sweep_param, param,value,delta_u_min_seconds\n\
         modes    csv   mode,t_seconds,re_amplitude,im_amplitude (stdout); with --out DIR: v0.csv, v1.csv, w1.csv as t_seconds,re_amplitude,im_amplitude\n\
         modes    json  grid and basis diagnostics\n\
         fisher   csv   chi_rad,fisher_info_per_s2,crb_s\n\
         fisher   json  scan summary and rows\n\
         simulate json  n_trials, true_delta_u [s], estimator_mean [s], estimator_std [s], analytic_bound [s], seed, generator\n\
         simulate csv   quantity,value\n\
         budget   csv   kind,timing_asd_s_per_rtHz,ratio_to_quantum_floor,dominant\n\
         budget   json  rows, quantum_floor, rss_total, homodyne_variance_view\n\
         noise input    kind,amplitude,units,at_frequency_hz (units rad/rtHz for ceo_phase, s/rtHz otherwise)\n\
         --dump-outcomes  raw little-endian f64, one per trial\n\
         \n# scenario keys: [section] key = default\n",
    );
    for (section, key, default) in SCENARIO_KEYS {
        s.push_str(&format!("[{section}] {key} = {default}\n"));
    }
    s
}

fn error_record(err: &Error) -> serde_json::Value {
    let mut record = json!({ "error": err.kind(), "message": err.to_string() });
    match err {
        Error::Config { line, key, .. } => {
            record["line"] = json!(line);
            record["key"] = json!(key);
        }
        Error::NoiseInput { line, .. } => record["line"] = json!(line),
        _ => {}
    }
    record
}

/// `quantity,value` rows for every numeric field of a flat record.
fn record_csv<T: Serialize>(record: &T) -> Result<String> {
    let value = serde_json::to_value(record)?;
    let mut out = String::from("quantity,value\n");
    if let Some(map) = value.as_object() {
        for (key, v) in map {
            if let Some(x) = v.as_f64() {
                let text = if v.is_f64() { sci(x) } else { v.to_string() };
                out.push_str(&format!("{key},{text}\n"));
            }
        }
    }
    Ok(out)
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV writers emit UTF-8"))
}

fn execute(cli: &Cli, stdout: &mut (dyn Write + Send)) -> Result<()> {
    if cli.schema {
        stdout.write_all(schema().as_bytes())?;
        return Ok(());
    }
    let Some(command) = &cli.command else {
        return Err(Error::Config {
            line: 0,
            key: "command".into(),
            message: "no command given (expected sql, modes, fisher, simulate or budget)".into(),
        });
    };
    let mut scenario = match &cli.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        scenario.run.seed = seed;
    }

    match command {
        Command::Sql => {
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Csv if scenario.run.sweep_param != SweepParam::None => {
                    let rows = sql_sweep(&scenario)?;
                    csv_bytes(|b| write_sweep_csv(&rows, b))?
                }
                Format::Csv => record_csv(&cmd_sql(&scenario)?)?,
                Format::Json => to_json(&cmd_sql(&scenario)?)?,
            };
            emit(&cli.out, &text, stdout)
        }
        Command::Modes => {
            let basis = cmd_modes(&scenario)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => emit(&cli.out, &to_json(&mode_diagnostics(&basis))?, stdout),
                Format::Csv => match &cli.out {
                    Some(dir) => write_mode_files(dir, &basis),
                    None => {
                        let mut w = io::BufWriter::new(stdout);
                        writeln!(w, "mode,{MODE_CSV_HEADER}")?;
                        for mode in [&basis.v0, &basis.v1, &basis.w1] {
                            for (u, a) in basis.grid().times().zip(&mode.amplitude) {
                                writeln!(w, "{},{},{},{}", mode.label, sci(u), sci(a.re), sci(a.im))?;
                            }
                        }
                        w.flush()?;
                        Ok(())
                    }
                },
            }
        }
        Command::Fisher => {
            let scan = cmd_fisher(&scenario)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = format!("{FISHER_CSV_HEADER}\n");
                    for r in &scan.rows {
                        s.push_str(&format!("{},{},{}\n", sci(r.lo.mixing_angle), sci(r.fisher_info), sci(r.crb)));
                    }
                    s
                }
                Format::Json => to_json(&json!({ "summary": scan.summary, "rows": scan.rows }))?,
            };
            emit(&cli.out, &text, stdout)
        }
        Command::Simulate { dump_outcomes } => {
            let (report, record) = cmd_simulate(&scenario, None)?;
            if let Some(path) = dump_outcomes {
                write_outcomes_le(&record.outcomes, io::BufWriter::new(fs::File::create(path)?))?;
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report)?,
                Format::Csv => record_csv(&report)?,
            };
            emit(&cli.out, &text, stdout)
        }
        Command::Budget { noise } => {
            let report = cmd_budget(&scenario, noise.as_deref())?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_bytes(|b| report.budget.write_csv(b))?,
                Format::Json => to_json(&report)?,
            };
            emit(&cli.out, &text, stdout)
        }
    }
}

fn write_mode_files(dir: &Path, basis: &crate::mode_lab::ModeBasis) -> Result<()> {
    fs::create_dir_all(dir)?;
    for mode in [&basis.v0, &basis.v1, &basis.w1] {
        let file = fs::File::create(dir.join(format!("{}.csv", mode.label)))?;
        mode.write_csv(io::BufWriter::new(file))?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let record = json!({ "error": "usage", "message": e.to_string().trim() });
            let _ = writeln!(stderr, "{record}");
            return 2;
        }
    };
    let outcome = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Config {
            line: 0,
            key: "QTIMING_THREADS".into(),
            message: e.to_string(),
        })
        .and_then(|pool| pool.install(|| execute(&cli, stdout)));
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{}", error_record(&err));
            1
        }
    }
}
