use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metrics recorded after one batch has been scored and trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimestampRecord {
    pub timestamp: usize,
    /// Fraction of the batch classified correctly before training on it.
    pub classification_rate: f64,
    pub hidden_nodes: usize,
    pub parameters: usize,
    /// Cumulative wall-clock seconds up to the end of this batch.
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsTimeline {
    pub records: Vec<TimestampRecord>,
}

impl MetricsTimeline {
    pub fn push(&mut self, record: TimestampRecord) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl MeanStd {
    fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count() as f64;
        let mean = values.clone().sum::<f64>() / n;
        let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        MeanStd {
            mean,
            std: var.sqrt(),
        }
    }
}

/// Averages over all timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub timestamps: usize,
    pub classification_rate: MeanStd,
    pub hidden_nodes: MeanStd,
    pub final_parameters: usize,
    pub total_seconds: f64,
}

pub fn aggregate(timeline: &MetricsTimeline) -> Result<Summary> {
    let records = &timeline.records;
    let last = records.last().ok_or(Error::EmptyTimeline)?;
    Ok(Summary {
        timestamps: records.len(),
        classification_rate: MeanStd::of(records.iter().map(|r| r.classification_rate)),
        hidden_nodes: MeanStd::of(records.iter().map(|r| r.hidden_nodes as f64)),
        final_parameters: last.parameters,
        total_seconds: last.elapsed_seconds,
    })
}
