//! A small separation sweep run through the simulation harness, written as
//! CSV to stdout.
//!
//! Pass a preset name (for example `exp4_gamma`) to run its desk grid instead.

use csvt::harness::{
    emit_results, run_experiment_with, ExperimentConfig, ExperimentKind, GridPoint, GridScale,
    ResultFormat,
};

fn main() -> csvt::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(name) => ExperimentConfig::preset(name.parse()?, GridScale::Desk, 1),
        None => {
            let points = [0.1, 0.2, 0.4, 0.8]
                .map(|g| GridPoint::new(2000, 50, 10, 0.2).with_gamma(g))
                .to_vec();
            let mut cfg = ExperimentConfig::custom(ExperimentKind::Custom, points, 1);
            cfg.reps = 20;
            cfg
        }
    };
    let rows = run_experiment_with(&cfg, |row| {
        eprintln!("gamma = {}: accuracy {:.2}", row.point.gamma, row.accuracy);
    })?;
    let dir = tempfile::tempdir().map_err(|e| csvt::Error::Serialization(e.to_string()))?;
    let path = dir.path().join("summary.csv");
    emit_results(&rows, &path, ResultFormat::Csv)?;
    print!("{}", std::fs::read_to_string(&path).unwrap_or_default());
    Ok(())
}
