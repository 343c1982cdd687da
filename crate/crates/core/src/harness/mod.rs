//! Prequential test-then-train evaluation: configuration, the driver loop,
//! metric aggregation and report files.

mod config;
mod metrics;
mod prequential;
mod report;

pub use crate::learner::Variant;
pub use config::{DatasetSpec, ExperimentConfig};
pub use metrics::{aggregate, MeanStd, MetricsTimeline, Summary, TimestampRecord};
pub use prequential::{prequential_run, prequential_run_on, prequential_run_with, RunOutput};
pub use report::{write_report, ReportPaths, EVENTS_FILE, SUMMARY_FILE, TIMELINE_FILE, TRACE_FILE};
