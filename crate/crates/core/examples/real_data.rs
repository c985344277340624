//! Check every benchmark preset found in a data directory (first argument,
//! default `data/`). Missing files are reported as skipped.

use std::path::PathBuf;

use csvt::ingest::{preset_check, DatasetPreset, PresetStatus};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("data"), PathBuf::from);
    for preset in DatasetPreset::all() {
        let path = dir.join(preset.file_name);
        match preset_check(&preset, &path) {
            Ok(PresetStatus::Skipped { path }) => {
                println!("{:<6} SKIPPED ({} not found)", preset.name, path.display())
            }
            Ok(status @ (PresetStatus::Passed(_) | PresetStatus::Failed(_))) => {
                let (PresetStatus::Passed(r) | PresetStatus::Failed(r)) = &status else {
                    unreachable!()
                };
                let top: Vec<String> = r
                    .spectrum
                    .singular_values
                    .iter()
                    .take(4)
                    .map(|s| format!("{s:.2}"))
                    .collect();
                println!(
                    "{:<6} {:<4} K_hat = {} (true K = {}), T = {:.3}, top [{}], {:.2e} s",
                    preset.name,
                    status.label(),
                    r.k_hat,
                    preset.true_k,
                    r.threshold.threshold,
                    top.join(", "),
                    r.wall_time
                );
            }
            Err(e) => println!("{:<6} ERROR {e}", preset.name),
        }
    }
}
