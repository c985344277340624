//! The `csvt` binary end to end.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use csvt::ingest::{estimate_file, CsvSpec};
use csvt::TnRule;

fn csvt_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csvt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Three separated groups of 30 samples in 4 dimensions, with a label column.
fn write_three_groups(path: &Path) {
    let mut f = std::fs::File::create(path).unwrap();
    writeln!(f, "a,b,c,d,group").unwrap();
    for i in 0..90 {
        let g = i / 30;
        let jitter = |j: usize| ((i * 7 + j * 13) % 11) as f64 / 10.0 - 0.5;
        let mut row: Vec<String> = (0..4)
            .map(|j| {
                let mean = if j == g { 40.0 } else { 0.0 };
                (mean + jitter(j)).to_string()
            })
            .collect();
        row.push(format!("g{g}"));
        writeln!(f, "{}", row.join(",")).unwrap();
    }
}

#[test]
fn estimate_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.csv");
    write_three_groups(&path);
    let p = path.to_str().unwrap();

    let out = csvt_bin(&["estimate", "--input", p, "--header", "--label-col", "4"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("K_hat = 3"), "{}", stdout(&out));

    let out = csvt_bin(&[
        "estimate",
        "--input",
        p,
        "--header",
        "--label-col",
        "4",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k_hat"], 3);
    assert_eq!(v["singular_values"].as_array().unwrap().len(), 4);
    // 17 significant digits: d.dddddddddddddddde±x
    let text = stdout(&out);
    let threshold = text.split("\"threshold\":").nth(1).unwrap();
    let mantissa = threshold.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
}

#[test]
fn estimate_reports_bad_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,2\n3,oops\n").unwrap();
    let out = csvt_bin(&["estimate", "--input", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("column 2"), "{err}");
}

#[test]
fn estimate_with_explicit_tn_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cols.csv");
    std::fs::write(&path, "0,0,10,10\n0,0,0,0\n").unwrap();
    let out = csvt_bin(&[
        "estimate",
        "--input",
        path.to_str().unwrap(),
        "--orientation",
        "cols",
        "--tn",
        "0",
    ]);
    assert!(out.status.success());
    // centered spectrum {10, 0} against T = √2 + √4
    assert!(stdout(&out).contains("K_hat = 2"), "{}", stdout(&out));
}

#[test]
fn realdata_missing_file_is_skipped() {
    let out = csvt_bin(&[
        "realdata",
        "--preset",
        "usps",
        "--input",
        "/nonexistent/usps.txt",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("SKIPPED"));
}

#[test]
fn realdata_wrong_shape_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.csv");
    write_three_groups(&path);
    let out = csvt_bin(&[
        "realdata",
        "--preset",
        "iris",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected n=150"));
}

#[test]
fn demos_emit_tables() {
    for (which, rows) in [("fig1", 20), ("remark2", 20), ("pathology", 50)] {
        let out = csvt_bin(&["demo", "--which", which, "--seed", "3"]);
        assert!(out.status.success());
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,sigma_raw,sigma_centered,threshold");
        assert_eq!(lines.len(), rows + 1, "{which}");
    }
}

#[test]
fn verify_passes() {
    let out = csvt_bin(&["verify"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn simulate_writes_results_and_flags_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.json");
    let out = csvt_bin(&[
        "simulate",
        "--experiment",
        "exp1_high_dim",
        "--scale",
        "0.1",
        "--reps",
        "3",
        "--seed",
        "5",
        "--output",
        ok.to_str().unwrap(),
        "--format",
        "json",
        "--threads",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csvt::harness::read_results(&ok, csvt::harness::ResultFormat::Json).unwrap();
    assert_eq!(
        (rows[0].point.n, rows[0].point.p, rows[0].reps),
        (10, 1000, 3)
    );

    // K grows past min(p, n) once p is scaled down to 5
    let bad = dir.path().join("bad.csv");
    let out = csvt_bin(&[
        "simulate",
        "--experiment",
        "exp2_k_growth",
        "--scale",
        "0.05",
        "--reps",
        "2",
        "--output",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csvt::harness::read_results(&bad, csvt::harness::ResultFormat::Csv).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].error.is_none() && rows[1].error.is_some());
}

#[test]
fn file_estimates_are_bitwise_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.csv");
    write_three_groups(&path);
    let spec = CsvSpec {
        has_header: true,
        label_column: Some(4),
        ..CsvSpec::default()
    };
    let a = estimate_file(&path, &spec, TnRule::LogN).unwrap();
    let b = estimate_file(&path, &spec, TnRule::LogN).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(
        bits(&a.spectrum.singular_values),
        bits(&b.spectrum.singular_values)
    );
    assert_eq!(a.k_hat, b.k_hat);
}
