//! CSV ingestion for recorded streams.
//!
//! Every non-label column is a numeric feature. The whole file is read up
//! front so each feature can be min-max scaled with its observed range; rows
//! are then replayed in file order.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{normalize, DataStream, LabeledSample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvOptions {
    pub label_column: usize,
    /// Number of classes; inferred as `max label + 1` (at least 2) when absent.
    pub classes: Option<usize>,
    /// Skip the first row.
    pub header: bool,
}

pub struct CsvStream {
    rows: std::vec::IntoIter<LabeledSample>,
    n_features: usize,
    n_classes: usize,
}

impl CsvStream {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.len() == 0
    }
}

pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<CsvStream> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let malformed = |row: usize, message: String| Error::MalformedRow {
        path: PathBuf::from(path),
        row,
        message,
    };

    let mut arity = None;
    let mut raw_rows: Vec<(Vec<f64>, usize, usize)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .position()
            .map_or(raw_rows.len() + 1, |p| p.line() as usize);
        let width = *arity.get_or_insert(record.len());
        if record.len() != width {
            return Err(malformed(
                row,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        if options.label_column >= width {
            return Err(malformed(
                row,
                format!(
                    "label column {} outside {width} fields",
                    options.label_column
                ),
            ));
        }
        let mut features = Vec::with_capacity(width - 1);
        let mut label = 0;
        for (col, field) in record.iter().enumerate() {
            if col == options.label_column {
                label = parse_label(field).ok_or_else(|| {
                    malformed(row, format!("label {field:?} is not a class index"))
                })?;
            } else {
                let v: f64 = field.parse().map_err(|_| {
                    malformed(row, format!("column {col}: {field:?} is not a number"))
                })?;
                if !v.is_finite() {
                    return Err(malformed(row, format!("column {col}: non-finite value")));
                }
                features.push(v);
            }
        }
        if let Some(classes) = options.classes {
            if label >= classes {
                return Err(malformed(
                    row,
                    format!("label {label} out of range for {classes} classes"),
                ));
            }
        }
        raw_rows.push((features, label, row));
    }

    if raw_rows.is_empty() {
        return Err(Error::EmptyStream);
    }
    let n_features = raw_rows[0].0.len();
    if n_features == 0 {
        return Err(malformed(raw_rows[0].2, "no feature columns".into()));
    }

    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); n_features];
    for (features, _, _) in &raw_rows {
        for (r, &v) in ranges.iter_mut().zip(features) {
            r.0 = r.0.min(v);
            r.1 = r.1.max(v);
        }
    }
    let n_classes = options
        .classes
        .unwrap_or_else(|| raw_rows.iter().map(|r| r.1 + 1).max().unwrap_or(0).max(2));

    let rows = raw_rows
        .into_iter()
        .map(|(features, label, _)| {
            let features = normalize(&features, &ranges)?;
            Ok(LabeledSample { features, label })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CsvStream {
        rows: rows.into_iter(),
        n_features,
        n_classes,
    })
}

fn parse_label(field: &str) -> Option<usize> {
    if let Ok(v) = field.parse::<usize>() {
        return Some(v);
    }
    let v: f64 = field.parse().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v < usize::MAX as f64).then_some(v as usize)
}

impl Iterator for CsvStream {
    type Item = LabeledSample;

    fn next(&mut self) -> Option<LabeledSample> {
        self.rows.next()
    }
}

impl DataStream for CsvStream {
    fn n_features(&self) -> usize {
        self.n_features
    }
    fn n_classes(&self) -> usize {
        self.n_classes
    }
}
