//! Hidden-layer plasticity: sigma-rule triggers over the bias and variance
//! sequences, their dynamic confidence coefficients, and the grow/prune
//! mutations of [`NetworkState`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dae::NetworkState;
use crate::error::{ensure_len, Error, Result};
use crate::math::argmin;

/// Observations needed before a tracker's minima are meaningful. Until then
/// the minima follow the running values, so the first spread estimate is
/// never compared against the zero spread of a single observation.
pub const ARMING_COUNT: u64 = 2;

/// Running mean/std of a bias² or variance sequence with their recorded minima.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SignificanceTracker {
    count: u64,
    mean: f64,
    m2: f64,
    mean_min: f64,
    std_min: f64,
}

impl SignificanceTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
        if self.count <= ARMING_COUNT {
            self.reset_minima();
        } else {
            self.mean_min = self.mean_min.min(self.mean);
            self.std_min = self.std_min.min(self.std());
        }
        Ok(())
    }

    /// Sets the minima to the current running values.
    pub fn reset_minima(&mut self) {
        self.mean_min = self.mean;
        self.std_min = self.std();
    }

    pub fn is_armed(&self) -> bool {
        self.count >= ARMING_COUNT
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population standard deviation of the observed values.
    pub fn std(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0).sqrt()
        }
    }

    pub fn mean_min(&self) -> f64 {
        self.mean_min
    }

    pub fn std_min(&self) -> f64 {
        self.std_min
    }
}

/// Growth confidence `1.3·exp(-bias²) + 0.7`.
pub fn growth_coefficient(bias_sq: f64) -> f64 {
    1.3 * (-bias_sq).exp() + 0.7
}

/// Pruning confidence `1.3·exp(-Var) + 0.7`.
pub fn prune_coefficient(variance: f64) -> f64 {
    1.3 * (-variance).exp() + 0.7
}

/// High-bias test: `μ + σ ≥ μ_min + π·σ_min`.
pub fn check_growth(tracker: &SignificanceTracker, coefficient: f64) -> bool {
    tracker.mean + tracker.std() >= tracker.mean_min + coefficient * tracker.std_min
}

/// High-variance test: `μ + σ ≥ μ_min + 2χ·σ_min`. The factor 2 keeps a
/// transient variance spike right after a growth from removing a unit.
pub fn check_prune(tracker: &SignificanceTracker, coefficient: f64) -> bool {
    tracker.mean + tracker.std() >= tracker.mean_min + 2.0 * coefficient * tracker.std_min
}

/// Appends a hidden unit whose encoder column is `-residual` (clamped to
/// `[-1, 1]`), with bias drawn from `U[-1, 1]` and a zero softmax row.
/// Existing parameters are left untouched.
pub fn grow_node<R: Rng + ?Sized>(
    state: &mut NetworkState,
    residual: &[f64],
    rng: &mut R,
) -> Result<()> {
    ensure_len(state.n_features(), residual.len())?;
    let column = residual.iter().map(|e| (-e).clamp(-1.0, 1.0)).collect();
    state.weights.push(column);
    state.hidden_bias.push(rng.random_range(-1.0..=1.0));
    state.output_weights.push(vec![0.0; state.n_classes()]);
    Ok(())
}

/// Removes the unit with the smallest significance (lowest index on ties).
/// Returns the removed index, or `None` when only one unit is left.
pub fn prune_node(state: &mut NetworkState, significance: &[f64]) -> Result<Option<usize>> {
    ensure_len(state.n_hidden(), significance.len())?;
    if state.n_hidden() <= 1 {
        log::debug!("prune skipped: network is down to a single hidden unit");
        return Ok(None);
    }
    let unit = argmin(significance);
    state.weights.remove(unit);
    state.hidden_bias.remove(unit);
    state.output_weights.remove(unit);
    Ok(Some(unit))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Generative,
    Discriminative,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Generative => "generative",
            Phase::Discriminative => "discriminative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Grow,
    Prune,
    /// The prune rule fired with a single unit left.
    PruneSkipped,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Grow => "grow",
            EventKind::Prune => "prune",
            EventKind::PruneSkipped => "prune-skipped",
        }
    }
}

/// One structural mutation (or skipped mutation) with the trigger values
/// that caused it, captured before the minima reset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralEvent {
    pub timestamp: usize,
    /// Training step within the batch: generative steps come first, then
    /// discriminative steps continue the count.
    pub step: usize,
    /// Position of the sample in the stream.
    pub sample: usize,
    pub phase: Phase,
    pub kind: EventKind,
    /// Unit removed by a prune, or index of the new unit for a grow.
    pub unit: Option<usize>,
    pub hidden_after: usize,
    pub mean: f64,
    pub std: f64,
    pub mean_min: f64,
    pub std_min: f64,
    pub coefficient: f64,
}
