//! Online denoising autoencoder whose hidden layer grows and shrinks while it
//! learns from a drifting data stream.
//!
//! The model is a single-hidden-layer tied-weight denoising autoencoder with a
//! softmax head. Every incoming batch is first used to score the model, then
//! trained on in two single-pass phases: a generative (reconstruction) phase
//! while labels are pending, followed by a discriminative (softmax) phase once
//! they arrive. In both phases a closed-form bias/variance estimate of the
//! expected squared error drives hidden-unit growth (high bias) and pruning
//! (high variance).
//!
//! Module map:
//!
//! * [`streams`]: data sources, normalization, masking noise, running input statistics
//! * [`dae`]: network state, encode/decode, reconstruction loss, tied-weight SGD
//! * [`significance`]: closed-form E[y], E[z], E[z²], bias², variance and hidden-unit significance
//! * [`structure`]: sigma-rule trackers, dynamic coefficients, grow/prune mutations
//! * [`discriminative`]: softmax head, supervised SGD, predictive bias/variance
//! * [`learner`]: the per-sample training loop tying the pieces together
//! * [`harness`]: prequential test-then-train driver, metrics, reports

pub mod dae;
pub mod discriminative;
mod error;
pub mod harness;
pub mod learner;
pub(crate) mod math;
pub mod significance;
pub mod streams;
pub mod structure;

pub use dae::{Checkpoint, NetworkState};
pub use discriminative::Prediction;
pub use error::{Error, Result};
pub use harness::{
    aggregate, prequential_run, prequential_run_on, DatasetSpec, ExperimentConfig, MetricsTimeline,
    RunOutput, Summary, TimestampRecord, Variant,
};
pub use learner::Learner;
pub use significance::{NsEstimate, ProbitForm};
pub use streams::{CorruptedSample, DataBatch, DataStream, LabeledSample, RunningStats};
pub use structure::{EventKind, Phase, SignificanceTracker, StructuralEvent};
