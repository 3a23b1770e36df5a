//! `vqabench run | score | report`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::harness::{
    fill_missing_baselines, run_suite_with, workers_from_env, RecordSet, RunConfig,
};
use crate::report::render_report;
use crate::scoring::{kinds_of, score_records, ScoreSet, DEFAULT_A_STAR};
use crate::simulator::Simulator;

#[derive(Debug, Parser)]
#[command(
    name = "vqabench",
    version,
    about = "Variational-algorithm benchmark suite on a statevector simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a suite and write one record file per problem kind.
    Run { config: PathBuf },
    /// Score the record files in a directory.
    Score {
        records_dir: PathBuf,
        /// Relative-error threshold for the capacity score.
        #[arg(long, default_value_t = DEFAULT_A_STAR)]
        a_star: f64,
        /// Device to score when the directory holds several.
        #[arg(long)]
        device: Option<String>,
        /// Output path; defaults to `<records-dir>/scores.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render radar and bar charts from one or more score files.
    Report {
        /// Score files followed by the output directory.
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
    },
}

/// What `run` did; `failures` makes the exit code 2.
#[derive(Debug)]
pub struct RunOutcome {
    pub written: Vec<PathBuf>,
    pub records: usize,
    pub failures: Vec<String>,
}

/// Name of the resolved config written next to the records.
pub fn config_file(dir: &Path, device: &str) -> PathBuf {
    dir.join(format!("{device}_config.json"))
}

pub fn cmd_run(config_path: &Path) -> Result<RunOutcome> {
    let suite = SuiteConfig::load(config_path)?;
    if !suite.output_dir.is_dir() {
        return Err(Error::Config(format!(
            "output_dir: {} is not an existing directory",
            suite.output_dir.display()
        )));
    }
    let workers = workers_from_env()?;
    let started = Instant::now();
    let set = run_suite_with(&suite, workers, |kind, size, result| {
        let elapsed = started.elapsed().as_secs_f64();
        match result {
            Ok(r) => eprintln!("[{elapsed:8.1}s] {kind} size {size}: {} cycles", r.len()),
            Err(e) => eprintln!("[{elapsed:8.1}s] {kind} size {size}: failed: {e}"),
        }
    })?;
    let mut written = set.save_dir(&suite.output_dir, &suite.device)?;
    let cfg_path = config_file(&suite.output_dir, &suite.device);
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&suite)? + "\n")
        .map_err(|e| Error::io(&cfg_path, e))?;
    written.push(cfg_path);
    Ok(RunOutcome {
        written,
        records: set.len(),
        failures: set
            .failures
            .iter()
            .map(|f| format!("{} size {}: {}", f.kind, f.size, f.message))
            .collect(),
    })
}

/// Scores one device's records and writes the score file.
pub fn cmd_score(
    records_dir: &Path,
    a_star: f64,
    device: Option<&str>,
    out: Option<&Path>,
) -> Result<(ScoreSet, PathBuf)> {
    let mut devices = RecordSet::load_dir(records_dir)?;
    let name = match device {
        Some(d) => d.to_string(),
        None => match devices.len() {
            0 => {
                return Err(Error::Scoring(format!(
                    "no record files in {}",
                    records_dir.display()
                )))
            }
            1 => devices.keys().next().unwrap().clone(),
            _ => {
                return Err(Error::Scoring(format!(
                    "{} holds records of several devices ({}); pick one with --device",
                    records_dir.display(),
                    devices.keys().cloned().collect::<Vec<_>>().join(", ")
                )))
            }
        },
    };
    let mut set = devices
        .remove(&name)
        .ok_or_else(|| Error::Scoring(format!("no records for device {name:?}")))?;
    if set.is_empty() {
        return Err(Error::Scoring(format!("no records for device {name:?}")));
    }
    // Missing baselines are replayed with the settings the run used, if known.
    let cfg = config_file(records_dir, &name);
    let run_config = if cfg.exists() {
        let suite = SuiteConfig::load(&cfg)?;
        RunConfig {
            optimizer: suite.optimizer,
            simulator: Simulator::with_max_qubits(suite.max_qubits),
        }
    } else {
        RunConfig::default()
    };
    fill_missing_baselines(&mut set, &run_config)?;
    let scores = score_records(&name, &set, a_star)?;
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| records_dir.join("scores.json"));
    std::fs::write(&path, scores.to_json()?).map_err(|e| Error::io(&path, e))?;
    Ok((scores, path))
}

pub fn cmd_report(score_files: &[PathBuf], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let sets = score_files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str::<ScoreSet>(&text)
                .map_err(|e| Error::Scoring(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    render_report(&sets, out_dir)
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or("-".into(), |x| format!("{x:.prec$}"))
}

/// Plain-text score table.
pub fn format_table(s: &ScoreSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("device {}  (A* = {})\n", s.device, s.a_star));
    out.push_str(&format!(
        "{:<5} {:>12} {:>8} {:>10} {:>8} {:>9} {:>8} {:>8}\n",
        "", "gates/s", "runtime", "rel.err", "accur.", "exponent", "scal.", "capacity"
    ));
    for kind in kinds_of(s) {
        let p = &s.per_problem[kind.code()];
        out.push_str(&format!(
            "{:<5} {:>12.4e} {:>8.3} {:>10.5} {:>8.3} {:>9} {:>8} {:>8}\n",
            kind.code(),
            p.pure.runtime,
            p.mapped.runtime,
            p.pure.accuracy,
            p.mapped.accuracy,
            opt(p.pure.scalability, 4),
            opt(p.mapped.scalability, 3),
            p.pure.capacity,
        ));
    }
    out.push_str(&format!(
        "{:<5} {:>12} {:>8.3} {:>10} {:>8.3} {:>9} {:>8.3} {:>8.3}\n",
        "all", "", s.runtime, "", s.accuracy, "", s.scalability, s.capacity
    ));
    out.push_str(&format!("overall {:.4}\n", s.overall));
    for kind in kinds_of(s) {
        let p = &s.per_problem[kind.code()];
        let mut notes = vec![format!(
            "N_e-N_s divisor: gates/s {:.4e}, rel.err {:.5}",
            p.runtime_printed_divisor, p.accuracy_printed_divisor
        )];
        if p.pure.scalability.is_none() {
            notes.push("fewer than 3 sizes, no scalability".into());
        }
        if p.scalability_degenerate {
            notes.push("constant job times, exponent set to 0".into());
        }
        if !p.accuracy_excluded_sizes.is_empty() {
            notes.push(format!(
                "zero baseline at sizes {:?}",
                p.accuracy_excluded_sizes
            ));
        }
        out.push_str(&format!("  {}: {}\n", kind.code(), notes.join("; ")));
    }
    out
}

pub fn main_with(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Run { config } => match cmd_run(&config) {
            Ok(outcome) => {
                for p in &outcome.written {
                    println!("wrote {}", p.display());
                }
                println!("{} records", outcome.records);
                if outcome.failures.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    for f in &outcome.failures {
                        eprintln!("failed: {f}");
                    }
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Score {
            records_dir,
            a_star,
            device,
            out,
        } => match cmd_score(&records_dir, a_star, device.as_deref(), out.as_deref()) {
            Ok((scores, path)) => {
                let mut stdout = std::io::stdout().lock();
                let _ = write!(stdout, "{}", format_table(&scores));
                let _ = writeln!(stdout, "wrote {}", path.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Report { mut paths } => {
            let out_dir = paths.pop().expect("clap enforces two paths");
            match cmd_report(&paths, &out_dir) {
                Ok(written) => {
                    for p in written {
                        println!("wrote {}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
