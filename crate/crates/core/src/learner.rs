//! The per-sample learning loop.
//!
//! Each training sample goes through, in order: forward pass, significance
//! estimate, bias tracker update and growth check, variance tracker update
//! and pruning check (skipped when a unit was just added), then one SGD
//! step. Generative and discriminative phases keep separate tracker pairs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dae::{decode, encode, generative_gradient, NetworkState};
use crate::discriminative::{discriminative_gradient, discriminative_ns, predict, Prediction};
use crate::error::{Error, Result};
use crate::significance::{hidden_significance, ns_estimate, ProbitForm};
use crate::streams::{mask_noise, one_hot, CorruptedSample, RunningStats};
use crate::structure::{
    check_growth, check_prune, grow_node, growth_coefficient, prune_coefficient, prune_node,
    EventKind, Phase, SignificanceTracker, StructuralEvent,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Evolving denoising autoencoder starting from a single hidden unit.
    #[default]
    Devdan,
    /// Fixed-size autoencoder trained on clean inputs.
    FixedAe,
    /// Fixed-size denoising autoencoder trained on masked inputs.
    FixedDae,
}

impl Variant {
    pub fn evolves(self) -> bool {
        self == Variant::Devdan
    }

    pub fn masks_inputs(self) -> bool {
        self != Variant::FixedAe
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Devdan => "devdan",
            Variant::FixedAe => "fixed-ae",
            Variant::FixedDae => "fixed-dae",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "devdan" => Ok(Variant::Devdan),
            "fixed-ae" => Ok(Variant::FixedAe),
            "fixed-dae" => Ok(Variant::FixedDae),
            other => Err(Error::Config(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub variant: Variant,
    pub corruption: f64,
    pub lr_generative: f64,
    pub lr_discriminative: f64,
    /// Hidden units of the fixed variants.
    pub hidden: usize,
    pub probit: ProbitForm,
    /// Keep a per-step record of the significance estimates.
    pub trace: bool,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            variant: Variant::Devdan,
            corruption: 0.1,
            lr_generative: 0.01,
            lr_discriminative: 0.01,
            hidden: 10,
            probit: ProbitForm::default(),
            trace: false,
        }
    }
}

/// Where in the stream a training step happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepContext {
    pub timestamp: usize,
    pub step: usize,
    pub sample: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub timestamp: usize,
    pub step: usize,
    pub phase: Phase,
    pub bias_sq: f64,
    pub variance: f64,
    pub hidden: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Samples whose raw variance was negative in at least one component.
    pub variance_clamps: u64,
    /// SGD steps skipped because the gradient was not finite.
    pub divergences: u64,
    /// Inputs passed through masking noise.
    pub masked_samples: u64,
    /// Labels revealed to the learner.
    pub labels_seen: u64,
}

#[derive(Debug, Clone, Default)]
struct TrackerPair {
    bias: SignificanceTracker,
    variance: SignificanceTracker,
}

#[derive(Debug, Clone)]
pub struct Learner {
    config: LearnerConfig,
    state: NetworkState,
    stats: RunningStats,
    rng: ChaCha8Rng,
    generative: TrackerPair,
    discriminative: TrackerPair,
    events: Vec<StructuralEvent>,
    trace: Vec<TraceRecord>,
    counters: Counters,
}

impl Learner {
    pub fn new(
        n_features: usize,
        n_classes: usize,
        config: LearnerConfig,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&config.corruption) {
            return Err(Error::Config(format!(
                "corruption probability must lie in [0, 1), got {}",
                config.corruption
            )));
        }
        if !(config.lr_generative >= 0.0 && config.lr_discriminative >= 0.0) {
            return Err(Error::Config("learning rates must be non-negative".into()));
        }
        // Separate ChaCha stream so model randomness never aliases a data
        // generator seeded with the same value.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let hidden = if config.variant.evolves() {
            1
        } else {
            config.hidden
        };
        if hidden == 0 {
            return Err(Error::Config(
                "fixed variants need at least one hidden unit".into(),
            ));
        }
        let state = NetworkState::random(n_features, hidden, n_classes, &mut rng)?;
        Ok(Learner {
            config,
            state,
            stats: RunningStats::new(n_features),
            rng,
            generative: TrackerPair::default(),
            discriminative: TrackerPair::default(),
            events: Vec::new(),
            trace: Vec::new(),
            counters: Counters::default(),
        })
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.config
    }

    pub fn state(&self) -> &NetworkState {
        &self.state
    }

    pub fn stats(&self) -> &RunningStats {
        &self.stats
    }

    pub fn events(&self) -> &[StructuralEvent] {
        &self.events
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn into_parts(
        self,
    ) -> (
        NetworkState,
        Vec<StructuralEvent>,
        Vec<TraceRecord>,
        Counters,
    ) {
        (self.state, self.events, self.trace, self.counters)
    }

    /// Classifies a clean input. Never masks and never updates anything.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        predict(x, &self.state)
    }

    /// Unsupervised step on one sample whose label is still pending.
    pub fn train_generative(&mut self, x: &[f64], ctx: StepContext) -> Result<()> {
        let sample = if self.config.variant.masks_inputs() {
            self.counters.masked_samples += 1;
            mask_noise(x, self.config.corruption, &mut self.rng)
        } else {
            CorruptedSample::clean(x)
        };
        self.stats.update(&sample.corrupted)?;

        if self.config.variant.evolves() && self.stats.count() >= 2 {
            let estimate = ns_estimate(x, &self.stats, &self.state, self.config.probit)?;
            self.counters.variance_clamps += u64::from(estimate.clamped > 0);
            let residual = self.residual(&sample.corrupted, x)?;
            self.adapt(
                Phase::Generative,
                estimate.bias_sq,
                estimate.variance,
                &residual,
                ctx,
            )?;
        }

        let grad = generative_gradient(&self.state, &sample)?;
        if grad.is_finite() {
            grad.apply(&mut self.state, self.config.lr_generative);
        } else {
            self.counters.divergences += 1;
        }
        Ok(())
    }

    /// Supervised step once the sample's label is known.
    pub fn train_discriminative(
        &mut self,
        x: &[f64],
        label: usize,
        ctx: StepContext,
    ) -> Result<()> {
        let target = one_hot(label, self.state.n_classes())?;
        self.counters.labels_seen += 1;

        if self.config.variant.evolves() && self.stats.count() >= 2 {
            let ns = discriminative_ns(&target, &self.stats, &self.state, self.config.probit)?;
            self.counters.variance_clamps += u64::from(ns.clamped > 0);
            let residual = self.residual(x, x)?;
            self.adapt(
                Phase::Discriminative,
                ns.bias_sq,
                ns.variance,
                &residual,
                ctx,
            )?;
        }

        let grad = discriminative_gradient(&self.state, x, &target)?;
        if grad.is_finite() {
            grad.apply(&mut self.state, self.config.lr_discriminative);
        } else {
            self.counters.divergences += 1;
        }
        Ok(())
    }

    /// Reconstruction residual `x - z` with `z` computed from `input`.
    fn residual(&self, input: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let z = decode(&encode(input, &self.state)?, &self.state)?;
        Ok(x.iter().zip(&z).map(|(x, z)| x - z).collect())
    }

    fn adapt(
        &mut self,
        phase: Phase,
        bias_sq: f64,
        variance: f64,
        residual: &[f64],
        ctx: StepContext,
    ) -> Result<()> {
        let trackers = match phase {
            Phase::Generative => &mut self.generative,
            Phase::Discriminative => &mut self.discriminative,
        };
        let event =
            |kind, unit, hidden_after, t: &SignificanceTracker, coefficient| StructuralEvent {
                timestamp: ctx.timestamp,
                step: ctx.step,
                sample: ctx.sample,
                phase,
                kind,
                unit,
                hidden_after,
                mean: t.mean(),
                std: t.std(),
                mean_min: t.mean_min(),
                std_min: t.std_min(),
                coefficient,
            };

        trackers.bias.update(bias_sq)?;
        let mut grew = false;
        if trackers.bias.is_armed() {
            let coefficient = growth_coefficient(bias_sq);
            if check_growth(&trackers.bias, coefficient) {
                grow_node(&mut self.state, residual, &mut self.rng)?;
                let hidden = self.state.n_hidden();
                self.events.push(event(
                    EventKind::Grow,
                    Some(hidden - 1),
                    hidden,
                    &trackers.bias,
                    coefficient,
                ));
                trackers.bias.reset_minima();
                grew = true;
            }
        }

        trackers.variance.update(variance)?;
        if !grew && trackers.variance.is_armed() {
            let coefficient = prune_coefficient(variance);
            if check_prune(&trackers.variance, coefficient) {
                let significance =
                    hidden_significance(&self.stats, &self.state, self.config.probit)?;
                let removed = prune_node(&mut self.state, &significance)?;
                let kind = if removed.is_some() {
                    EventKind::Prune
                } else {
                    EventKind::PruneSkipped
                };
                self.events.push(event(
                    kind,
                    removed,
                    self.state.n_hidden(),
                    &trackers.variance,
                    coefficient,
                ));
                trackers.variance.reset_minima();
            }
        }

        if self.config.trace {
            self.trace.push(TraceRecord {
                timestamp: ctx.timestamp,
                step: ctx.step,
                phase,
                bias_sq,
                variance,
                hidden: self.state.n_hidden(),
            });
        }
        Ok(())
    }
}
