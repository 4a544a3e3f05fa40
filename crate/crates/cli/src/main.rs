//! `noonsim` — sweep N00N-state phase-sensitivity metrics over time under a
//! decoherence channel, reproduce the canned result figures, and validate
//! channel physicality.
//!
//! Exit codes: 0 success, 1 usage/config/I-O error, 2 complete-positivity
//! violation (strict sweeps and failed validations).

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use noonsim_cli::config::{parse_config, ScenarioConfig};
use noonsim_cli::csvout::{emit_csv, fmt_sig};
use noonsim_cli::figures::figure_preset;
use noonsim_cli::plot::render_plot;
use noonsim_cli::sweep::{run_sweep, validate, SweepError};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "noonsim",
    version,
    about = "Phase sensitivity of N00N probes under decoherence channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep from a config file and emit CSV.
    Sweep {
        /// Scenario config (INI-style `key = value`).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Abort on the first complete-positivity violation.
        #[arg(long)]
        strict: bool,
    },
    /// Reproduce a canned figure preset (1-15): CSV per curve plus an SVG.
    Figure {
        /// Preset number.
        fig_id: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Scan a scenario for complete-positivity violations.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the shot-noise and Heisenberg phase-uncertainty references.
    Bounds {
        /// Photon count.
        #[arg(long)]
        n: usize,
    },
}

enum CliFailure {
    Usage(String),
    Physicality(String),
}

impl From<SweepError> for CliFailure {
    fn from(err: SweepError) -> Self {
        match err {
            SweepError::Physicality { .. } => CliFailure::Physicality(err.to_string()),
            SweepError::Model(_) => CliFailure::Usage(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliFailure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliFailure::Physicality(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Path) -> Result<ScenarioConfig, CliFailure> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliFailure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliFailure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::Sweep { config, out, strict } => {
            let mut scenario = load_config(&config)?;
            scenario.strict |= strict;
            let rows = run_sweep(&scenario)?;
            match out {
                Some(path) => {
                    let mut file = fs::File::create(&path).map_err(|e| {
                        CliFailure::Usage(format!("cannot write {}: {e}", path.display()))
                    })?;
                    emit_csv(&rows, &mut file)
                        .map_err(|e| CliFailure::Usage(e.to_string()))?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    emit_csv(&rows, &mut lock)
                        .and_then(|()| lock.flush())
                        .map_err(|e| CliFailure::Usage(e.to_string()))?;
                }
            }
            Ok(())
        }
        Command::Figure { fig_id, out } => {
            let preset = figure_preset(fig_id).map_err(CliFailure::Usage)?;
            fs::create_dir_all(&out).map_err(|e| {
                CliFailure::Usage(format!("cannot create {}: {e}", out.display()))
            })?;
            let mut series = Vec::new();
            for (label, scenario) in &preset.scenarios {
                let rows = run_sweep(scenario)?;
                let csv_path = out.join(format!("fig{fig_id:02}_{label}.csv"));
                let mut file = fs::File::create(&csv_path).map_err(|e| {
                    CliFailure::Usage(format!("cannot write {}: {e}", csv_path.display()))
                })?;
                emit_csv(&rows, &mut file).map_err(|e| CliFailure::Usage(e.to_string()))?;
                println!("wrote {}", csv_path.display());
                let points: Vec<(f64, f64)> = rows
                    .iter()
                    .filter_map(|row| preset.metric.extract(row).map(|v| (row.t, v)))
                    .collect();
                series.push((label.clone(), points));
            }
            let svg_path = out.join(format!("fig{fig_id:02}.svg"));
            let title = format!("{} — figure preset {fig_id}", preset.metric.label());
            render_plot(&series, preset.metric.label(), &title, &svg_path)
                .map_err(|e| CliFailure::Usage(e.to_string()))?;
            println!("wrote {}", svg_path.display());
            Ok(())
        }
        Command::Validate { config } => {
            let scenario = load_config(&config)?;
            let report = validate(&scenario)?;
            println!("channel: {:?}", scenario.channel);
            println!(
                "cp constraint (gamma1 >= gamma2/2 where applicable): {}",
                if scenario.channel.cp_constraint_satisfied() { "satisfied" } else { "violated" }
            );
            println!("grid: {} points on [0, {}]", report.points, fmt_sig(report.t_max));
            println!(
                "min Choi eigenvalue: {} at t = {}",
                fmt_sig(report.min_eigenvalue),
                fmt_sig(report.min_eigenvalue_t)
            );
            if report.is_clean() {
                println!("result: PASS (completely positive on the whole grid)");
                Ok(())
            } else {
                for (start, end) in &report.violations {
                    println!("violating interval: [{}, {}]", fmt_sig(*start), fmt_sig(*end));
                }
                println!("result: FAIL (complete positivity violated)");
                Err(CliFailure::Physicality(format!(
                    "complete positivity violated on {} interval(s)",
                    report.violations.len()
                )))
            }
        }
        Command::Bounds { n } => {
            if n == 0 {
                return Err(CliFailure::Usage("n must be >= 1".into()));
            }
            let (shot_noise, heisenberg) = noonsim::reference_bounds(n);
            println!("n = {n}");
            println!("shot-noise limit:  delta phi = {}", fmt_sig(shot_noise));
            println!("Heisenberg limit:  delta phi = {}", fmt_sig(heisenberg));
            Ok(())
        }
    }
}
