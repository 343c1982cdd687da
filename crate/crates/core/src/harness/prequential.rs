use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::metrics::{aggregate, MetricsTimeline, Summary, TimestampRecord};
use crate::dae::NetworkState;
use crate::error::{Error, Result};
use crate::learner::{Counters, Learner, StepContext, TraceRecord};
use crate::streams::{Batches, DataBatch, DataStream};
use crate::structure::{EventKind, StructuralEvent};

/// Everything a finished run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub growth_events: usize,
    pub prune_events: usize,
    pub prune_skips: usize,
    pub counters: Counters,
    #[serde(skip)]
    pub timeline: MetricsTimeline,
    #[serde(skip)]
    pub events: Vec<StructuralEvent>,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
    #[serde(skip)]
    pub final_state: Option<NetworkState>,
}

/// Runs the configured experiment on its configured dataset.
pub fn prequential_run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let stream = config.dataset.open(config.seed)?;
    prequential_run_on(stream, config)
}

/// Runs on an explicit stream; `config.dataset` is only recorded.
pub fn prequential_run_on<S: DataStream>(
    stream: S,
    config: &ExperimentConfig,
) -> Result<RunOutput> {
    prequential_run_with(stream, config, |_, _| {})
}

/// As [`prequential_run_on`], calling `before_test` with the learner and the
/// incoming batch right before the batch is scored.
pub fn prequential_run_with<S, F>(
    stream: S,
    config: &ExperimentConfig,
    mut before_test: F,
) -> Result<RunOutput>
where
    S: DataStream,
    F: FnMut(&Learner, &DataBatch),
{
    config.validate()?;
    let batches = Batches::new(stream, config.batch_size)?;
    let mut learner = Learner::new(
        batches.n_features(),
        batches.n_classes(),
        config.learner_config(),
        config.seed,
    )?;

    let mut timeline = MetricsTimeline::default();
    let mut offset = 0;
    let mut elapsed = 0.0;
    for batch in batches {
        before_test(&learner, &batch);
        let started = Instant::now();

        let mut correct = 0;
        for (x, &label) in batch.features.iter().zip(&batch.labels) {
            if learner.predict(x)?.class == label {
                correct += 1;
            }
        }

        let len = batch.len();
        for (t, x) in batch.features.iter().enumerate() {
            let ctx = StepContext {
                timestamp: batch.index,
                step: t,
                sample: offset + t,
            };
            learner.train_generative(x, ctx)?;
        }
        for (t, (x, &label)) in batch.features.iter().zip(&batch.labels).enumerate() {
            let ctx = StepContext {
                timestamp: batch.index,
                step: len + t,
                sample: offset + t,
            };
            learner.train_discriminative(x, label, ctx)?;
        }

        if config.timing {
            elapsed += started.elapsed().as_secs_f64();
        }
        let state = learner.state();
        timeline.push(TimestampRecord {
            timestamp: batch.index,
            classification_rate: correct as f64 / len as f64,
            hidden_nodes: state.n_hidden(),
            parameters: state.parameter_count(),
            elapsed_seconds: elapsed,
        });
        log::debug!(
            "batch {}: CR {:.4}, R {}",
            batch.index,
            correct as f64 / len as f64,
            state.n_hidden()
        );
        offset += len;
    }

    if timeline.is_empty() {
        return Err(Error::EmptyStream);
    }
    let summary = aggregate(&timeline)?;
    let (state, events, trace, counters) = learner.into_parts();
    let count = |kind| events.iter().filter(|e| e.kind == kind).count();
    Ok(RunOutput {
        config: config.clone(),
        summary,
        growth_events: count(EventKind::Grow),
        prune_events: count(EventKind::Prune),
        prune_skips: count(EventKind::PruneSkipped),
        counters,
        timeline,
        events,
        trace,
        final_state: Some(state),
    })
}
