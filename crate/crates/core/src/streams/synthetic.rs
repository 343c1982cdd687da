//! Synthetic drifting streams: SEA concepts and a rotating hyperplane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{normalize, DataStream, LabeledSample};
use crate::error::{Error, Result};

pub const DEFAULT_SEA_THRESHOLDS: [f64; 4] = [8.0, 9.0, 7.0, 9.5];

const SEA_FEATURES: usize = 3;
const SEA_RANGE: (f64, f64) = (0.0, 10.0);

/// Probability per sample that a drifting hyperplane weight reverses direction.
const HYPERPLANE_REVERSAL_PROB: f64 = 0.1;

/// SEA concept: class 1 iff `f1 + f2 <= threshold` (the third feature is irrelevant).
pub fn sea_label(raw: &[f64], threshold: f64) -> usize {
    usize::from(raw[0] + raw[1] <= threshold)
}

/// Hyperplane concept: class 1 iff `Σ wᵢxᵢ > Σ wᵢ / 2`.
pub fn hyperplane_label(weights: &[f64], x: &[f64]) -> usize {
    let dot: f64 = weights.iter().zip(x).map(|(w, x)| w * x).sum();
    let half: f64 = weights.iter().sum::<f64>() / 2.0;
    usize::from(dot > half)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeaConfig {
    pub samples: usize,
    pub thresholds: Vec<f64>,
    /// Fraction of labels flipped.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SeaConfig {
    fn default() -> Self {
        SeaConfig {
            samples: 100_000,
            thresholds: DEFAULT_SEA_THRESHOLDS.to_vec(),
            noise: 0.0,
            seed: 0,
        }
    }
}

/// Three features uniform on `[0, 10]`, emitted normalized to `[0, 1]`.
/// The threshold switches at equal-length block boundaries.
pub struct SeaGenerator {
    rng: ChaCha8Rng,
    thresholds: Vec<f64>,
    noise: f64,
    block_len: usize,
    emitted: usize,
    samples: usize,
}

impl SeaGenerator {
    pub fn new(config: &SeaConfig) -> Result<Self> {
        if config.thresholds.is_empty() {
            return Err(Error::EmptyThresholds);
        }
        if config.samples == 0 {
            return Err(Error::Config(
                "SEA generator needs at least one sample".into(),
            ));
        }
        if !(0.0..=1.0).contains(&config.noise) {
            return Err(Error::Config(format!(
                "SEA label noise must lie in [0, 1], got {}",
                config.noise
            )));
        }
        Ok(SeaGenerator {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            thresholds: config.thresholds.clone(),
            noise: config.noise,
            block_len: config.samples.div_ceil(config.thresholds.len()),
            emitted: 0,
            samples: config.samples,
        })
    }

    /// Threshold in force for the sample at position `index`.
    pub fn threshold_at(&self, index: usize) -> f64 {
        let block = (index / self.block_len).min(self.thresholds.len() - 1);
        self.thresholds[block]
    }
}

impl Iterator for SeaGenerator {
    type Item = LabeledSample;

    fn next(&mut self) -> Option<LabeledSample> {
        if self.emitted >= self.samples {
            return None;
        }
        let raw: Vec<f64> = (0..SEA_FEATURES)
            .map(|_| self.rng.random_range(SEA_RANGE.0..SEA_RANGE.1))
            .collect();
        let mut label = sea_label(&raw, self.threshold_at(self.emitted));
        if self.noise > 0.0 && self.rng.random_bool(self.noise) {
            label = 1 - label;
        }
        self.emitted += 1;
        let features = normalize(&raw, &[SEA_RANGE; SEA_FEATURES]).expect("fixed arity");
        Some(LabeledSample { features, label })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.samples - self.emitted;
        (left, Some(left))
    }
}

impl DataStream for SeaGenerator {
    fn n_features(&self) -> usize {
        SEA_FEATURES
    }
    fn n_classes(&self) -> usize {
        2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperplaneConfig {
    pub samples: usize,
    pub features: usize,
    /// Per-sample change applied to every weight.
    pub drift: f64,
    pub seed: u64,
}

impl Default for HyperplaneConfig {
    fn default() -> Self {
        HyperplaneConfig {
            samples: 100_000,
            features: 4,
            drift: 0.001,
            seed: 0,
        }
    }
}

/// Rotating hyperplane: features uniform on `[0, 1]`, weights start uniform on
/// `[0, 1]` and move by `drift` after every sample, each weight reversing its
/// direction with probability 0.1.
pub struct HyperplaneGenerator {
    rng: ChaCha8Rng,
    weights: Vec<f64>,
    directions: Vec<f64>,
    drift: f64,
    emitted: usize,
    samples: usize,
}

impl HyperplaneGenerator {
    pub fn new(config: &HyperplaneConfig) -> Result<Self> {
        if config.features < 2 {
            return Err(Error::TooFewFeatures(config.features));
        }
        if config.samples == 0 {
            return Err(Error::Config(
                "hyperplane generator needs at least one sample".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let weights = (0..config.features).map(|_| rng.random::<f64>()).collect();
        Ok(HyperplaneGenerator {
            rng,
            weights,
            directions: vec![1.0; config.features],
            drift: config.drift,
            emitted: 0,
            samples: config.samples,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Iterator for HyperplaneGenerator {
    type Item = LabeledSample;

    fn next(&mut self) -> Option<LabeledSample> {
        if self.emitted >= self.samples {
            return None;
        }
        let features: Vec<f64> = (0..self.weights.len())
            .map(|_| self.rng.random::<f64>())
            .collect();
        let label = hyperplane_label(&self.weights, &features);
        if self.drift != 0.0 {
            for (w, dir) in self.weights.iter_mut().zip(&mut self.directions) {
                *w += *dir * self.drift;
                if self.rng.random_bool(HYPERPLANE_REVERSAL_PROB) {
                    *dir = -*dir;
                }
            }
        }
        self.emitted += 1;
        Some(LabeledSample { features, label })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.samples - self.emitted;
        (left, Some(left))
    }
}

impl DataStream for HyperplaneGenerator {
    fn n_features(&self) -> usize {
        self.weights.len()
    }
    fn n_classes(&self) -> usize {
        2
    }
}
