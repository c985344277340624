//! Estimate K for a delimited file.
//!
//! ```text
//! cargo run --example estimate_csv -- data/iris.csv --header --label-col 4
//! ```
//!
//! Without arguments a three-cluster file is generated in a temporary
//! directory first.

use std::path::PathBuf;

use csvt::ingest::{load_csv_with_labels, CsvSpec};
use csvt::synth::{
    export_dataset, sample_dataset, seeded_rng, CenterMode, MixtureDesign, NoiseModel,
};
use csvt::{csvt, Strategy, TnRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut spec = CsvSpec::default();
    let _tmp;
    let path = match args.first() {
        Some(p) => PathBuf::from(p),
        None => {
            let mut rng = seeded_rng(3);
            let design =
                MixtureDesign::orthonormal(6, 600, 3, 0.5, 12.0, CenterMode::Basis, &mut rng)?;
            let (x, _) = sample_dataset(&design, NoiseModel::Unit, &mut rng)?;
            _tmp = tempfile::tempdir()?;
            let p = _tmp.path().join("three_clusters.csv");
            export_dataset(&x, None, &p, None)?;
            println!("generated {}", p.display());
            p
        }
    };
    for (i, a) in args.iter().enumerate() {
        match a.as_str() {
            "--header" => spec.has_header = true,
            "--label-col" => spec.label_column = Some(args[i + 1].parse()?),
            _ => {}
        }
    }

    let data = load_csv_with_labels(&path, &spec)?;
    let x = &data.matrix;
    println!("p = {}, n = {}", x.p(), x.n());
    if let Some(labels) = &data.labels {
        let mut distinct = labels.clone();
        distinct.sort();
        distinct.dedup();
        println!("label column has {} distinct values", distinct.len());
    }

    let report = csvt(x, TnRule::LogN, Strategy::Auto)?;
    let t = report.threshold.threshold;
    println!("T = {t:.4}");
    for (i, s) in report
        .spectrum
        .singular_values
        .iter()
        .take(report.r + 3)
        .enumerate()
    {
        let mark = if *s > t { "above" } else { "below" };
        println!("  sigma_{:<3} = {s:>12.4}  {mark}", i + 1);
    }
    println!(
        "K_hat = {} ({:?}, {:.2e} s)",
        report.k_hat, report.spectrum.strategy, report.wall_time
    );
    Ok(())
}
