use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::prequential::RunOutput;
use crate::error::{Error, Result};

pub const SUMMARY_FILE: &str = "summary.json";
pub const TIMELINE_FILE: &str = "timeline.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const TRACE_FILE: &str = "trace.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportPaths {
    pub summary: PathBuf,
    pub timeline: PathBuf,
    pub events: PathBuf,
    pub trace: Option<PathBuf>,
}

const TIMELINE_HEADER: &[&str] = &[
    "timestamp",
    "classification_rate",
    "hidden_nodes",
    "parameters",
    "elapsed_seconds",
];

const EVENTS_HEADER: &[&str] = &[
    "timestamp",
    "step",
    "sample",
    "phase",
    "event",
    "unit",
    "hidden_after",
    "mean",
    "std",
    "mean_min",
    "std_min",
    "coefficient",
];

const TRACE_HEADER: &[&str] = &[
    "timestamp",
    "step",
    "phase",
    "bias_sq",
    "variance",
    "hidden",
];

// Field order of the row structs must match the header constants.
#[derive(Serialize)]
struct EventRow<'a> {
    timestamp: usize,
    step: usize,
    sample: usize,
    phase: &'a str,
    event: &'a str,
    unit: Option<usize>,
    hidden_after: usize,
    mean: f64,
    std: f64,
    mean_min: f64,
    std_min: f64,
    coefficient: f64,
}

#[derive(Serialize)]
struct TraceRow<'a> {
    timestamp: usize,
    step: usize,
    phase: &'a str,
    bias_sq: f64,
    variance: f64,
    hidden: usize,
}

/// Writes `summary.json`, `timeline.csv`, `events.csv` and, for traced runs,
/// `trace.csv` into `dir` (created if missing).
pub fn write_report(output: &RunOutput, dir: impl AsRef<Path>) -> Result<ReportPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = ReportPaths {
        summary: dir.join(SUMMARY_FILE),
        timeline: dir.join(TIMELINE_FILE),
        events: dir.join(EVENTS_FILE),
        trace: (!output.trace.is_empty()).then(|| dir.join(TRACE_FILE)),
    };

    let json = serde_json::to_string_pretty(output)?;
    fs::write(&paths.summary, json + "\n").map_err(|e| Error::io(&paths.summary, e))?;

    write_csv(&paths.timeline, TIMELINE_HEADER, &output.timeline.records)?;
    write_csv(
        &paths.events,
        EVENTS_HEADER,
        output.events.iter().map(|e| EventRow {
            timestamp: e.timestamp,
            step: e.step,
            sample: e.sample,
            phase: e.phase.as_str(),
            event: e.kind.as_str(),
            unit: e.unit,
            hidden_after: e.hidden_after,
            mean: e.mean,
            std: e.std,
            mean_min: e.mean_min,
            std_min: e.std_min,
            coefficient: e.coefficient,
        }),
    )?;
    if let Some(path) = &paths.trace {
        write_csv(
            path,
            TRACE_HEADER,
            output.trace.iter().map(|t| TraceRow {
                timestamp: t.timestamp,
                step: t.step,
                phase: t.phase.as_str(),
                bias_sq: t.bias_sq,
                variance: t.variance,
                hidden: t.hidden,
            }),
        )?;
    }
    Ok(paths)
}

fn write_csv<T: Serialize>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = T>,
) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(file);
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
