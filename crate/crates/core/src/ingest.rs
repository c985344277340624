//! Delimited text loading and the four benchmark dataset presets.
//!
//! Files are read as-is: no scaling or whitening is applied before the
//! estimator runs.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{csvt, EstimateReport, TnRule};
use crate::spectral::{DataMatrix, Strategy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// One sample per line.
    #[default]
    SamplesAsRows,
    /// One feature per line.
    SamplesAsColumns,
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" | "samples_as_rows" => Ok(Orientation::SamplesAsRows),
            "cols" | "columns" | "samples_as_columns" => Ok(Orientation::SamplesAsColumns),
            _ => Err(Error::InvalidParameter(format!(
                "orientation must be `rows` or `cols`, got {s:?}"
            ))),
        }
    }
}

/// Layout of a delimited file. A space delimiter splits on runs of
/// whitespace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSpec {
    pub delimiter: char,
    pub has_header: bool,
    /// Index of a field removed from every line before parsing.
    pub label_column: Option<usize>,
    pub orientation: Orientation,
}

impl Default for CsvSpec {
    fn default() -> Self {
        Self {
            delimiter: ',',
            has_header: false,
            label_column: None,
            orientation: Orientation::SamplesAsRows,
        }
    }
}

impl CsvSpec {
    fn validate(&self) -> Result<()> {
        let d = self.delimiter;
        if !(d.is_ascii() && (d.is_ascii_graphic() || d == ' ' || d == '\t')) || d == '"' {
            return Err(Error::InvalidParameter(format!(
                "delimiter must be a printable ASCII character or tab, got {d:?}"
            )));
        }
        Ok(())
    }
}

/// A parsed file plus the dropped label field of each line, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedData {
    pub matrix: DataMatrix,
    pub labels: Option<Vec<String>>,
}

fn for_each_line(
    path: &Path,
    spec: &CsvSpec,
    mut f: impl FnMut(usize, Vec<&str>) -> Result<()>,
) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if spec.delimiter == ' ' {
        let mut first = true;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            if std::mem::take(&mut first) && spec.has_header {
                continue;
            }
            f(i + 1, line.split_whitespace().collect())?;
        }
        return Ok(());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter as u8)
        .has_headers(spec.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rec = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut rec) {
            Ok(false) => return Ok(()),
            Ok(true) => {
                let line = rec.position().map_or(0, |p| p.line() as usize);
                f(line, rec.iter().collect())?;
            }
            Err(e) => {
                return Err(match e.kind() {
                    csv::ErrorKind::Io(_) => match e.into_kind() {
                        csv::ErrorKind::Io(io) => Error::io(path, io),
                        _ => unreachable!(),
                    },
                    _ => Error::Parse {
                        path: path.to_path_buf(),
                        message: e.to_string(),
                    },
                })
            }
        }
    }
}

/// Parses a numeric delimited file into a `p × n` matrix.
pub fn load_csv_with_labels(path: &Path, spec: &CsvSpec) -> Result<LoadedData> {
    spec.validate()?;
    let mut width: Option<usize> = None;
    let mut lines = 0usize;
    let mut values = Vec::new();
    let mut labels = spec.label_column.map(|_| Vec::new());

    for_each_line(path, spec, |line, fields| {
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(Error::RaggedRow {
                path: path.to_path_buf(),
                line,
                expected,
                found: fields.len(),
            });
        }
        if let Some(lc) = spec.label_column {
            if lc >= expected {
                return Err(Error::InvalidParameter(format!(
                    "label column {lc} is out of range for {expected} fields"
                )));
            }
        }
        for (j, raw) in fields.into_iter().enumerate() {
            if Some(j) == spec.label_column {
                if let Some(l) = labels.as_mut() {
                    l.push(raw.to_string());
                }
                continue;
            }
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::NonNumeric {
                        path: path.to_path_buf(),
                        line,
                        column: j + 1,
                        value: raw.to_string(),
                    })
                }
            }
        }
        lines += 1;
        Ok(())
    })?;

    let fields = width.unwrap_or(0) - usize::from(spec.label_column.is_some());
    if lines == 0 || fields == 0 {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let matrix = match spec.orientation {
        // row-major samples are exactly the column-major p × n layout
        Orientation::SamplesAsRows => DataMatrix::new(fields, lines, values)?,
        Orientation::SamplesAsColumns => {
            DataMatrix::from_fn(lines, fields, |i, j| values[i * fields + j])?
        }
    };
    Ok(LoadedData { matrix, labels })
}

pub fn load_csv(path: &Path, spec: &CsvSpec) -> Result<DataMatrix> {
    load_csv_with_labels(path, spec).map(|d| d.matrix)
}

/// Loads the file and runs the estimator with the automatic strategy.
pub fn estimate_file(path: &Path, spec: &CsvSpec, rule: TnRule) -> Result<EstimateReport> {
    let x = load_csv(path, spec)?;
    csvt(&x, rule, Strategy::Auto)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Iris,
    Crab,
    Usps,
    Poker,
}

impl PresetName {
    pub const ALL: [PresetName; 4] = [
        PresetName::Iris,
        PresetName::Crab,
        PresetName::Usps,
        PresetName::Poker,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Iris => "iris",
            PresetName::Crab => "crab",
            PresetName::Usps => "usps",
            PresetName::Poker => "poker",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown preset {s:?}, expected iris, crab, usps or poker"
                ))
            })
    }
}

/// Shape and published outcome of a benchmark dataset, plus the file layout
/// it is expected in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetPreset {
    pub name: PresetName,
    pub expected_n: usize,
    pub expected_p: usize,
    pub true_k: usize,
    pub expected_k_hat: usize,
    pub spec: CsvSpec,
    /// Conventional file name inside a data directory.
    pub file_name: &'static str,
}

impl DatasetPreset {
    /// Layouts:
    /// - iris: header, four measurements, species last (`iris.csv`)
    /// - crab: header, five measurements, sex last (`crab.csv`)
    /// - usps: whitespace separated, digit first, 256 pixels (`usps.txt`, the
    ///   7291-line training split)
    /// - poker: no header, ten suit/rank codes, hand class last (`poker.csv`,
    ///   the 25010-line training split)
    pub fn get(name: PresetName) -> Self {
        let labelled_last = |p: usize, header: bool| CsvSpec {
            has_header: header,
            label_column: Some(p),
            ..CsvSpec::default()
        };
        match name {
            PresetName::Iris => Self {
                name,
                expected_n: 150,
                expected_p: 4,
                true_k: 3,
                expected_k_hat: 2,
                spec: labelled_last(4, true),
                file_name: "iris.csv",
            },
            PresetName::Crab => Self {
                name,
                expected_n: 200,
                expected_p: 5,
                true_k: 2,
                expected_k_hat: 2,
                spec: labelled_last(5, true),
                file_name: "crab.csv",
            },
            PresetName::Usps => Self {
                name,
                expected_n: 7291,
                expected_p: 256,
                true_k: 10,
                expected_k_hat: 10,
                spec: CsvSpec {
                    delimiter: ' ',
                    has_header: false,
                    label_column: Some(0),
                    orientation: Orientation::SamplesAsRows,
                },
                file_name: "usps.txt",
            },
            PresetName::Poker => Self {
                name,
                expected_n: 25010,
                expected_p: 10,
                true_k: 10,
                expected_k_hat: 10,
                spec: labelled_last(10, false),
                file_name: "poker.csv",
            },
        }
    }

    pub fn all() -> [DatasetPreset; 4] {
        PresetName::ALL.map(Self::get)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PresetStatus {
    Passed(EstimateReport),
    Failed(EstimateReport),
    Skipped { path: PathBuf },
}

impl PresetStatus {
    pub fn passed(&self) -> bool {
        matches!(self, PresetStatus::Passed(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            PresetStatus::Passed(_) => "PASS",
            PresetStatus::Failed(_) => "FAIL",
            PresetStatus::Skipped { .. } => "SKIPPED",
        }
    }
}

/// Loads the preset's file, checks its shape and compares `K̂` with the
/// published value. A missing file is `Skipped`, a wrong shape is an error.
pub fn preset_check(preset: &DatasetPreset, path: &Path) -> Result<PresetStatus> {
    if !path.exists() {
        return Ok(PresetStatus::Skipped {
            path: path.to_path_buf(),
        });
    }
    let x = load_csv(path, &preset.spec)?;
    if (x.n(), x.p()) != (preset.expected_n, preset.expected_p) {
        return Err(Error::DimensionMismatch {
            name: preset.name.to_string(),
            expected_n: preset.expected_n,
            expected_p: preset.expected_p,
            n: x.n(),
            p: x.p(),
        });
    }
    let report = csvt(&x, TnRule::LogN, Strategy::Auto)?;
    Ok(if report.k_hat == preset.expected_k_hat {
        PresetStatus::Passed(report)
    } else {
        PresetStatus::Failed(report)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file_with(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn rows_are_transposed() {
        let f = file_with("1,2\n3,4\n");
        let x = load_csv(f.path(), &CsvSpec::default()).unwrap();
        assert_eq!((x.p(), x.n()), (2, 2));
        assert_eq!(
            (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1)),
            (1.0, 3.0, 2.0, 4.0)
        );
    }

    #[test]
    fn columns_orientation() {
        let f = file_with("1,2,3\n4,5,6\n");
        let spec = CsvSpec {
            orientation: Orientation::SamplesAsColumns,
            ..CsvSpec::default()
        };
        let x = load_csv(f.path(), &spec).unwrap();
        assert_eq!((x.p(), x.n()), (2, 3));
        assert_eq!(x.column(2), &[3.0, 6.0]);
    }

    #[test]
    fn header_and_label_dropped() {
        let f = file_with("a,b,species\n1.5,2,setosa\n3,4,virginica\n");
        let spec = CsvSpec {
            has_header: true,
            label_column: Some(2),
            ..CsvSpec::default()
        };
        let d = load_csv_with_labels(f.path(), &spec).unwrap();
        assert_eq!((d.matrix.p(), d.matrix.n()), (2, 2));
        assert_eq!(d.matrix.column(0), &[1.5, 2.0]);
        assert_eq!(d.labels.unwrap(), vec!["setosa", "virginica"]);
    }

    #[test]
    fn whitespace_delimiter() {
        let f = file_with("7 0.5  -1 \n 3 1 2\n");
        let spec = CsvSpec {
            delimiter: ' ',
            label_column: Some(0),
            ..CsvSpec::default()
        };
        let x = load_csv(f.path(), &spec).unwrap();
        assert_eq!(x.values(), &[0.5, -1.0, 1.0, 2.0]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let f = file_with("1,2\n3,4,5\n");
        match load_csv(f.path(), &CsvSpec::default()) {
            Err(Error::RaggedRow {
                line,
                expected,
                found,
                ..
            }) => {
                assert_eq!((line, expected, found), (2, 2, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_numeric_reports_location() {
        let f = file_with("1,2\n3,x\n");
        match load_csv(f.path(), &CsvSpec::default()) {
            Err(Error::NonNumeric {
                line,
                column,
                value,
                ..
            }) => {
                assert_eq!((line, column, value.as_str()), (2, 2, "x"));
            }
            other => panic!("{other:?}"),
        }
        let f = file_with("1,nan\n");
        assert!(matches!(
            load_csv(f.path(), &CsvSpec::default()),
            Err(Error::NonNumeric { .. })
        ));
    }

    #[test]
    fn empty_and_missing_files() {
        let f = file_with("");
        assert!(matches!(
            load_csv(f.path(), &CsvSpec::default()),
            Err(Error::EmptyFile { .. })
        ));
        let f = file_with("a,b\n");
        let spec = CsvSpec {
            has_header: true,
            ..CsvSpec::default()
        };
        assert!(matches!(
            load_csv(f.path(), &spec),
            Err(Error::EmptyFile { .. })
        ));
        assert!(matches!(
            load_csv(Path::new("/nonexistent/x.csv"), &CsvSpec::default()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn label_column_out_of_range() {
        let f = file_with("1,2\n");
        let spec = CsvSpec {
            label_column: Some(5),
            ..CsvSpec::default()
        };
        assert!(load_csv(f.path(), &spec).is_err());
    }

    #[test]
    fn bad_delimiter_rejected() {
        let spec = CsvSpec {
            delimiter: '\u{7}',
            ..CsvSpec::default()
        };
        let f = file_with("1\n");
        assert!(matches!(
            load_csv(f.path(), &spec),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn presets_match_published_table() {
        let rows: Vec<_> = DatasetPreset::all()
            .iter()
            .map(|p| (p.expected_n, p.expected_p, p.true_k, p.expected_k_hat))
            .collect();
        assert_eq!(
            rows,
            vec![
                (150, 4, 3, 2),
                (200, 5, 2, 2),
                (7291, 256, 10, 10),
                (25010, 10, 10, 10)
            ]
        );
        assert_eq!("Poker".parse::<PresetName>().unwrap(), PresetName::Poker);
    }

    #[test]
    fn missing_preset_file_is_skipped() {
        let st = preset_check(
            &DatasetPreset::get(PresetName::Crab),
            Path::new("/nonexistent/crab.csv"),
        )
        .unwrap();
        assert_eq!(st.label(), "SKIPPED");
    }

    #[test]
    fn truncated_preset_is_dimension_mismatch() {
        let body: String = (0..100).map(|i| format!("{i},1,2,3,x\n")).collect();
        let f = file_with(&format!("a,b,c,d,label\n{body}"));
        let err = preset_check(&DatasetPreset::get(PresetName::Iris), f.path()).unwrap_err();
        assert!(
            matches!(err, Error::DimensionMismatch { n: 100, p: 4, .. }),
            "{err}"
        );
    }
}
