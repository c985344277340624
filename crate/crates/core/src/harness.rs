//! Seeded simulation grids: accuracy and runtime of the estimator over
//! parameter points, with replications run on a rayon pool.
//!
//! Replication `r` of point `i` draws from
//! `replication_rng(master_seed, replication_stream(i, r))`, so results do
//! not depend on the number of threads.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{csvt, TnRule};
use crate::spectral::Strategy;
use crate::synth::{
    replication_rng, replication_stream, sample_dataset, theoretical_delta, CenterMode,
    MixtureDesign, NoiseModel,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Exp1SampleRich,
    Exp1HighDim,
    Exp1Balanced,
    Exp2KGrowth,
    Exp3Imbalance,
    Exp4Gamma,
    Exp5Hetero,
    Custom,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Exp1SampleRich,
        ExperimentKind::Exp1HighDim,
        ExperimentKind::Exp1Balanced,
        ExperimentKind::Exp2KGrowth,
        ExperimentKind::Exp3Imbalance,
        ExperimentKind::Exp4Gamma,
        ExperimentKind::Exp5Hetero,
        ExperimentKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Exp1SampleRich => "exp1_sample_rich",
            ExperimentKind::Exp1HighDim => "exp1_high_dim",
            ExperimentKind::Exp1Balanced => "exp1_balanced",
            ExperimentKind::Exp2KGrowth => "exp2_k_growth",
            ExperimentKind::Exp3Imbalance => "exp3_imbalance",
            ExperimentKind::Exp4Gamma => "exp4_gamma",
            ExperimentKind::Exp5Hetero => "exp5_hetero",
            ExperimentKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown experiment {s:?}, expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// One parameter point. `eta_max` switches to heteroscedastic noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub beta: f64,
    pub gamma: f64,
    pub eta_max: Option<f64>,
}

impl GridPoint {
    pub fn new(n: usize, p: usize, k: usize, beta: f64) -> Self {
        Self {
            n,
            p,
            k,
            beta,
            gamma: 1.0,
            eta_max: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_eta_max(mut self, eta_max: f64) -> Self {
        self.eta_max = Some(eta_max);
        self
    }

    /// Multiplies `n` and `p` by `scale`, rounding and keeping both at least 1.
    pub fn scaled(self, scale: f64) -> Self {
        let s = |v: usize| ((v as f64 * scale).round() as usize).max(1);
        Self {
            n: s(self.n),
            p: s(self.p),
            ..self
        }
    }

    pub fn noise(&self) -> NoiseModel {
        self.eta_max
            .map_or(NoiseModel::Unit, NoiseModel::heteroscedastic)
    }

    fn feasible(&self) -> std::result::Result<(), String> {
        if self.k == 0 || self.k > self.p.min(self.n) {
            return Err(format!(
                "infeasible point: K={} must be in 1..=min(p, n)={}",
                self.k,
                self.p.min(self.n)
            ));
        }
        if self.n < 2 {
            return Err("infeasible point: n must be at least 2".into());
        }
        Ok(())
    }
}

/// Grid family for [`ExperimentConfig::preset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    /// Published sizes, up to 10⁷ samples or dimensions.
    Paper,
    /// Sizes that finish in minutes on one core.
    Desk,
}

impl FromStr for GridScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(GridScale::Paper),
            "desk" => Ok(GridScale::Desk),
            _ => Err(Error::InvalidParameter(format!(
                "grid must be `paper` or `desk`, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub points: Vec<GridPoint>,
    pub reps: usize,
    pub master_seed: u64,
    /// Multiplies `n` and `p` of every point, in `(0, 1]`.
    pub scale: f64,
    pub strategy: Strategy,
    pub rule: TnRule,
    pub center_mode: CenterMode,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

fn steps(first: f64, step: f64, count: usize) -> impl Iterator<Item = f64> {
    // integer multiples avoid accumulated drift, then round to the grid precision
    (0..count).map(move |i| ((first + step * i as f64) * 1e6).round() / 1e6)
}

fn paper_points(kind: ExperimentKind) -> Vec<GridPoint> {
    use ExperimentKind::*;
    let millions = (1..=10).map(|m| m * 1_000_000);
    match kind {
        Exp1SampleRich => millions.map(|n| GridPoint::new(n, 100, 99, 0.1)).collect(),
        Exp1HighDim => millions.map(|p| GridPoint::new(100, p, 10, 1.0)).collect(),
        Exp1Balanced => (1..=10)
            .map(|i| GridPoint::new(1000 * i, 1000 * i, 10 * i, 0.1))
            .collect(),
        Exp2KGrowth => {
            let ks = || std::iter::once(1).chain((1..=10).map(|i| 10 * i));
            ks().map(|k| GridPoint::new(1_000_000, 100, k, 0.1))
                .chain(ks().map(|k| GridPoint::new(100, 1_000_000, k, 1.0)))
                .collect()
        }
        Exp3Imbalance => steps(0.001, 0.001, 10)
            .map(|b| GridPoint::new(1_000_000, 200, 50, b))
            .collect(),
        Exp4Gamma => steps(0.1, 0.1, 10)
            .map(|g| GridPoint::new(100_000, 200, 200, 0.01).with_gamma(g))
            .chain(steps(0.1, 0.1, 10).map(|g| GridPoint::new(200, 100_000, 10, 0.5).with_gamma(g)))
            .collect(),
        Exp5Hetero => steps(0.1, 0.1, 15)
            .map(|e| GridPoint::new(1_000_000, 200, 200, 0.01).with_eta_max(e))
            .chain(
                steps(0.1, 0.1, 15)
                    .map(|e| GridPoint::new(200, 1_000_000, 10, 0.5).with_eta_max(e)),
            )
            .collect(),
        Custom => Vec::new(),
    }
}

fn desk_points(kind: ExperimentKind) -> Vec<GridPoint> {
    use ExperimentKind::*;
    match kind {
        Exp1SampleRich => vec![GridPoint::new(10_000, 100, 50, 0.1)],
        Exp1HighDim => vec![GridPoint::new(100, 10_000, 10, 1.0)],
        Exp1Balanced => vec![GridPoint::new(2000, 2000, 20, 0.1)],
        Exp2KGrowth => std::iter::once(1)
            .chain((1..=10).map(|i| 10 * i))
            .map(|k| GridPoint::new(2000, 100, k, 0.1))
            .collect(),
        Exp3Imbalance => steps(0.001, 0.001, 10)
            .map(|b| GridPoint::new(100_000, 200, 50, b))
            .collect(),
        Exp4Gamma => steps(0.1, 0.1, 10)
            .map(|g| GridPoint::new(10_000, 200, 50, 0.1).with_gamma(g))
            .collect(),
        Exp5Hetero => steps(0.1, 0.1, 15)
            .map(|e| GridPoint::new(10_000, 200, 50, 0.1).with_eta_max(e))
            .collect(),
        Custom => Vec::new(),
    }
}

impl ExperimentConfig {
    /// 100 replications over the named grid, Gram strategy, `t_n = ln n`.
    pub fn preset(kind: ExperimentKind, grid: GridScale, master_seed: u64) -> Self {
        let points = match grid {
            GridScale::Paper => paper_points(kind),
            GridScale::Desk => desk_points(kind),
        };
        Self::custom(kind, points, master_seed)
    }

    pub fn custom(kind: ExperimentKind, points: Vec<GridPoint>, master_seed: u64) -> Self {
        Self {
            kind,
            points,
            reps: 100,
            master_seed,
            scale: 1.0,
            strategy: Strategy::Gram,
            rule: TnRule::LogN,
            center_mode: CenterMode::Basis,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scale must be in (0, 1], got {}",
                self.scale
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Grid points after applying `scale`.
    pub fn scaled_points(&self) -> Vec<GridPoint> {
        self.points.iter().map(|pt| pt.scaled(self.scale)).collect()
    }
}

/// Aggregate over the replications of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: ExperimentKind,
    pub point: GridPoint,
    pub reps: usize,
    /// Fraction of replications with `K̂ = K`.
    pub accuracy: f64,
    /// Mean seconds per estimate, excluding data generation.
    pub mean_wall_time: f64,
    pub k_hat_histogram: BTreeMap<usize, usize>,
    /// Set when the point was skipped or a replication failed; the
    /// histogram is then empty and accuracy is 0.
    pub error: Option<String>,
}

impl SummaryRow {
    fn failed(experiment: ExperimentKind, point: GridPoint, reps: usize, error: String) -> Self {
        Self {
            experiment,
            point,
            reps,
            accuracy: 0.0,
            mean_wall_time: 0.0,
            k_hat_histogram: BTreeMap::new(),
            error: Some(error),
        }
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "replication panicked".into())
}

/// Generates one dataset and returns `(K̂, seconds spent in the estimator)`.
fn replicate(
    cfg: &ExperimentConfig,
    pt: &GridPoint,
    delta: f64,
    stream: u64,
) -> Result<(usize, f64)> {
    let mut rng = replication_rng(cfg.master_seed, stream);
    let design =
        MixtureDesign::orthonormal(pt.p, pt.n, pt.k, pt.beta, delta, cfg.center_mode, &mut rng)?;
    let (x, _) = sample_dataset(&design, pt.noise(), &mut rng)?;
    let report = csvt(&x, cfg.rule, cfg.strategy)?;
    Ok((report.k_hat, report.wall_time))
}

fn run_point(cfg: &ExperimentConfig, index: usize, pt: GridPoint) -> SummaryRow {
    if let Err(msg) = pt.feasible() {
        return SummaryRow::failed(cfg.kind, pt, cfg.reps, msg);
    }
    let delta = match theoretical_delta(pt.n, pt.p, pt.k, pt.beta, 1.0, cfg.rule, pt.gamma) {
        Ok(d) => d,
        Err(e) => return SummaryRow::failed(cfg.kind, pt, cfg.reps, e.to_string()),
    };
    let outcomes: Vec<std::result::Result<(usize, f64), String>> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let stream = replication_stream(index, rep);
            catch_unwind(AssertUnwindSafe(|| replicate(cfg, &pt, delta, stream)))
                .map_err(panic_message)
                .and_then(|r| r.map_err(|e| e.to_string()))
                .map_err(|e| format!("replication {rep}: {e}"))
        })
        .collect();

    let mut histogram = BTreeMap::new();
    let mut total_time = 0.0;
    for outcome in outcomes {
        match outcome {
            Ok((k_hat, secs)) => {
                *histogram.entry(k_hat).or_insert(0) += 1;
                total_time += secs;
            }
            Err(msg) => return SummaryRow::failed(cfg.kind, pt, cfg.reps, msg),
        }
    }
    let hits = histogram.get(&pt.k).copied().unwrap_or(0);
    SummaryRow {
        experiment: cfg.kind,
        point: pt,
        reps: cfg.reps,
        accuracy: hits as f64 / cfg.reps as f64,
        mean_wall_time: total_time / cfg.reps as f64,
        k_hat_histogram: histogram,
        error: None,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SummaryRow>> {
    run_experiment_with(cfg, |_| {})
}

/// Like [`run_experiment`], calling `on_row` as each point completes.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mut on_row: impl FnMut(&SummaryRow) + Send,
) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let mut body = || {
        cfg.scaled_points()
            .into_iter()
            .enumerate()
            .map(|(i, pt)| {
                let row = run_point(cfg, i, pt);
                on_row(&row);
                row
            })
            .collect::<Vec<_>>()
    };
    match cfg.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(body))
        }
        None => Ok(body()),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ResultFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ResultFormat::Csv),
            "json" => Ok(ResultFormat::Json),
            _ => Err(Error::InvalidParameter(format!(
                "format must be `csv` or `json`, got {s:?}"
            ))),
        }
    }
}

pub const CSV_COLUMNS: [&str; 12] = [
    "experiment",
    "n",
    "p",
    "K",
    "beta",
    "gamma",
    "eta_max",
    "reps",
    "accuracy",
    "mean_wall_time",
    "histogram",
    "error",
];

fn ser_err(e: impl fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

/// Writes one row per grid point. CSV floats use the shortest
/// representation that parses back exactly; the histogram is a JSON object.
pub fn emit_results(rows: &[SummaryRow], path: &Path, format: ResultFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    match format {
        ResultFormat::Json => {
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, rows).map_err(ser_err)?;
            writeln!(w).map_err(|e| Error::io(path, e))?;
            w.flush().map_err(|e| Error::io(path, e))
        }
        ResultFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(file);
            w.write_record(CSV_COLUMNS).map_err(ser_err)?;
            for r in rows {
                let pt = &r.point;
                let hist = serde_json::to_string(&r.k_hat_histogram).map_err(ser_err)?;
                w.write_record([
                    r.experiment.name().to_string(),
                    pt.n.to_string(),
                    pt.p.to_string(),
                    pt.k.to_string(),
                    pt.beta.to_string(),
                    pt.gamma.to_string(),
                    pt.eta_max.map(|e| e.to_string()).unwrap_or_default(),
                    r.reps.to_string(),
                    r.accuracy.to_string(),
                    r.mean_wall_time.to_string(),
                    hist,
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(ser_err)?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }
    }
}

fn field<T: FromStr>(rec: &csv::StringRecord, idx: usize, path: &Path) -> Result<T> {
    let raw = rec.get(idx).unwrap_or("");
    raw.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        message: format!("column {} has unparsable value {raw:?}", CSV_COLUMNS[idx]),
    })
}

/// Reads a file written by [`emit_results`].
pub fn read_results(path: &Path, format: ResultFormat) -> Result<Vec<SummaryRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        ResultFormat::Json => serde_json::from_reader(BufReader::new(file)).map_err(ser_err),
        ResultFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(file);
            let parse_err = |e: csv::Error| Error::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            };
            let header = rdr.headers().map_err(parse_err)?.clone();
            if header.iter().ne(CSV_COLUMNS) {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("unexpected header {header:?}"),
                });
            }
            let mut rows = Vec::new();
            for rec in rdr.records() {
                let rec = rec.map_err(parse_err)?;
                let eta = rec.get(6).unwrap_or("");
                let point = GridPoint {
                    n: field(&rec, 1, path)?,
                    p: field(&rec, 2, path)?,
                    k: field(&rec, 3, path)?,
                    beta: field(&rec, 4, path)?,
                    gamma: field(&rec, 5, path)?,
                    eta_max: if eta.is_empty() {
                        None
                    } else {
                        Some(field(&rec, 6, path)?)
                    },
                };
                let error = rec.get(11).filter(|s| !s.is_empty()).map(str::to_string);
                rows.push(SummaryRow {
                    experiment: field(&rec, 0, path)?,
                    point,
                    reps: field(&rec, 7, path)?,
                    accuracy: field(&rec, 8, path)?,
                    mean_wall_time: field(&rec, 9, path)?,
                    k_hat_histogram: serde_json::from_str(rec.get(10).unwrap_or(""))
                        .map_err(ser_err)?,
                    error,
                });
            }
            Ok(rows)
        }
    }
}
