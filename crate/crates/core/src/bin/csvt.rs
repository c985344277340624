//! Command-line front end: `estimate`, `realdata`, `demo`, `verify`, `simulate`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use csvt::harness::{
    emit_results, run_experiment_with, ExperimentConfig, ExperimentKind, GridScale, ResultFormat,
};
use csvt::ingest::{
    estimate_file, preset_check, CsvSpec, DatasetPreset, Orientation, PresetName, PresetStatus,
};
use csvt::theory::{
    collinear_spectra, five_cluster_spectra, single_component_spectra, verification_suite,
};
use csvt::{EstimateReport, TnRule};

#[derive(Parser)]
#[command(
    name = "csvt",
    version,
    about = "Estimate the number of Gaussian mixture components by centered singular value thresholding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Rows,
    Cols,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoArg {
    Fig1,
    Pathology,
    Remark2,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate K for a delimited numeric file.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
        #[arg(long)]
        header: bool,
        /// Zero-based index of a column to drop.
        #[arg(long)]
        label_col: Option<usize>,
        #[arg(long, value_enum, default_value = "rows")]
        orientation: OrientationArg,
        /// `log` for t_n = ln n, or a non-negative number.
        #[arg(long, default_value = "log")]
        tn: String,
        #[arg(long)]
        json: bool,
    },
    /// Check a benchmark dataset against its published estimate.
    Realdata {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print singular-value tables of the illustrative designs as CSV.
    Demo {
        #[arg(long, value_enum)]
        which: DemoArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the numerical checks of the supporting bounds.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a simulation grid and write one summary row per point.
    Simulate {
        #[arg(long)]
        experiment: String,
        /// `desk` or `paper` sizes.
        #[arg(long, default_value = "desk")]
        grid: String,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn report_json(r: &EstimateReport) -> String {
    let sv: Vec<String> = r.spectrum.singular_values.iter().map(|&v| num(v)).collect();
    format!(
        "{{\"k_hat\":{},\"r\":{},\"tn\":{},\"threshold\":{},\"singular_values\":[{}],\"strategy\":\"{:?}\",\"wall_time\":{}}}",
        r.k_hat,
        r.r,
        num(r.threshold.tn),
        num(r.threshold.threshold),
        sv.join(","),
        r.spectrum.strategy,
        num(r.wall_time)
    )
}

fn report_text(r: &EstimateReport) -> String {
    let top: Vec<String> = r
        .spectrum
        .singular_values
        .iter()
        .take(r.r + 5)
        .map(|v| format!("{v:.6}"))
        .collect();
    format!(
        "K_hat = {}\nr = {}\nT = {:.6} (t_n = {:.6})\ntop singular values: {}\nwall time: {:.6} s",
        r.k_hat,
        r.r,
        r.threshold.threshold,
        r.threshold.tn,
        top.join(", "),
        r.wall_time
    )
}

fn run(cli: Cli) -> csvt::Result<ExitCode> {
    match cli.command {
        Command::Estimate {
            input,
            delimiter,
            header,
            label_col,
            orientation,
            tn,
            json,
        } => {
            let spec = CsvSpec {
                delimiter,
                has_header: header,
                label_column: label_col,
                orientation: match orientation {
                    OrientationArg::Rows => Orientation::SamplesAsRows,
                    OrientationArg::Cols => Orientation::SamplesAsColumns,
                },
            };
            let rule: TnRule = tn.parse()?;
            let report = estimate_file(&input, &spec, rule)?;
            if json {
                println!("{}", report_json(&report));
            } else {
                println!("{}", report_text(&report));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Realdata {
            preset,
            input,
            json,
        } => {
            let preset = DatasetPreset::get(preset.parse::<PresetName>()?);
            let status = preset_check(&preset, &input)?;
            match &status {
                PresetStatus::Skipped { path } => {
                    println!("{} SKIPPED: {} not found", preset.name, path.display());
                }
                PresetStatus::Passed(r) | PresetStatus::Failed(r) => {
                    if json {
                        println!("{}", report_json(r));
                    } else {
                        println!(
                            "{} {}: n={} p={} true K={} expected K_hat={}",
                            preset.name,
                            status.label(),
                            preset.expected_n,
                            preset.expected_p,
                            preset.true_k,
                            preset.expected_k_hat
                        );
                        println!("{}", report_text(r));
                    }
                }
            }
            Ok(if matches!(status, PresetStatus::Failed(_)) {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Demo { which, seed } => {
            let spectra = match which {
                DemoArg::Fig1 => single_component_spectra(seed)?,
                DemoArg::Pathology => collinear_spectra(seed)?,
                DemoArg::Remark2 => five_cluster_spectra(seed)?,
            };
            spectra.write_csv(std::io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed } => {
            let outcomes = verification_suite(seed)?;
            let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {}", o.name, o.detail);
            }
            Ok(if outcomes.iter().all(|o| o.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Simulate {
            experiment,
            grid,
            scale,
            reps,
            seed,
            output,
            format,
            threads,
        } => {
            let kind: ExperimentKind = experiment.parse()?;
            let format: ResultFormat = format.parse()?;
            let mut cfg = ExperimentConfig::preset(kind, grid.parse::<GridScale>()?, seed);
            cfg.scale = scale;
            cfg.reps = reps;
            cfg.threads = threads;
            let rows = run_experiment_with(&cfg, |row| {
                let pt = &row.point;
                let mut err = std::io::stderr().lock();
                let _ = match &row.error {
                    None => writeln!(
                        err,
                        "n={} p={} K={} beta={} gamma={} eta_max={:?}: accuracy {} ({:.4} s/estimate)",
                        pt.n, pt.p, pt.k, pt.beta, pt.gamma, pt.eta_max, row.accuracy, row.mean_wall_time
                    ),
                    Some(e) => writeln!(err, "n={} p={} K={}: error: {e}", pt.n, pt.p, pt.k),
                };
            })?;
            emit_results(&rows, &output, format)?;
            Ok(if rows.iter().any(|r| r.error.is_some()) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
