//! Tied-weight denoising autoencoder: state, forward passes, reconstruction
//! loss and the single-sample generative SGD step.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::math::sigmoid;
use crate::streams::CorruptedSample;

/// Bounds applied to reconstructions before taking logarithms.
pub const OUTPUT_CLAMP: f64 = 1e-12;

const INITIAL_WEIGHT_SCALE: f64 = 0.01;

/// Parameters of the encoder, the tied decoder and the softmax head.
///
/// The encoder weight matrix `W` (n × R) is stored column-wise, one
/// n-vector per hidden unit, so units can be appended or removed without
/// touching the others. The decoder uses `Wᵀ`; there is no separate decoder
/// matrix. The softmax weights `Φ` (R × m) are stored row-wise, one m-vector
/// per hidden unit.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    n_features: usize,
    n_classes: usize,
    pub(crate) weights: Vec<Vec<f64>>,
    pub(crate) hidden_bias: Vec<f64>,
    pub(crate) decoder_bias: Vec<f64>,
    pub(crate) output_weights: Vec<Vec<f64>>,
    pub(crate) output_bias: Vec<f64>,
}

impl NetworkState {
    /// All-zero network with `hidden` units.
    pub fn zeros(n_features: usize, hidden: usize, n_classes: usize) -> Result<Self> {
        if n_features == 0 || hidden == 0 || n_classes == 0 {
            return Err(Error::Config(format!(
                "network dimensions must be positive (n={n_features}, R={hidden}, m={n_classes})"
            )));
        }
        Ok(NetworkState {
            n_features,
            n_classes,
            weights: vec![vec![0.0; n_features]; hidden],
            hidden_bias: vec![0.0; hidden],
            decoder_bias: vec![0.0; n_features],
            output_weights: vec![vec![0.0; n_classes]; hidden],
            output_bias: vec![0.0; n_classes],
        })
    }

    /// Randomly initialized network: `W ~ 0.01·U[-1,1]`, `b ~ U[-1,1]`,
    /// everything else zero.
    pub fn random<R: Rng + ?Sized>(
        n_features: usize,
        hidden: usize,
        n_classes: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut state = Self::zeros(n_features, hidden, n_classes)?;
        for column in &mut state.weights {
            for w in column.iter_mut() {
                *w = INITIAL_WEIGHT_SCALE * rng.random_range(-1.0..=1.0);
            }
        }
        for b in &mut state.hidden_bias {
            *b = rng.random_range(-1.0..=1.0);
        }
        Ok(state)
    }

    /// Builds a state from explicit parts, checking every dimension.
    pub fn from_parts(
        weights: Vec<Vec<f64>>,
        hidden_bias: Vec<f64>,
        decoder_bias: Vec<f64>,
        output_weights: Vec<Vec<f64>>,
        output_bias: Vec<f64>,
    ) -> Result<Self> {
        let hidden = weights.len();
        let n_features = decoder_bias.len();
        let n_classes = output_bias.len();
        let mut state = Self::zeros(n_features, hidden.max(1), n_classes)?;
        if hidden == 0 {
            return Err(Error::Config(
                "a network needs at least one hidden unit".into(),
            ));
        }
        ensure_len(hidden, hidden_bias.len())?;
        ensure_len(hidden, output_weights.len())?;
        for column in &weights {
            ensure_len(n_features, column.len())?;
        }
        for row in &output_weights {
            ensure_len(n_classes, row.len())?;
        }
        state.weights = weights;
        state.hidden_bias = hidden_bias;
        state.decoder_bias = decoder_bias;
        state.output_weights = output_weights;
        state.output_bias = output_bias;
        Ok(state)
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_hidden(&self) -> usize {
        self.weights.len()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// `W[feature, unit]`.
    pub fn weight(&self, feature: usize, unit: usize) -> f64 {
        self.weights[unit][feature]
    }

    pub fn weight_column(&self, unit: usize) -> &[f64] {
        &self.weights[unit]
    }

    pub fn weight_column_mut(&mut self, unit: usize) -> &mut [f64] {
        &mut self.weights[unit]
    }

    pub fn hidden_bias(&self) -> &[f64] {
        &self.hidden_bias
    }

    pub fn hidden_bias_mut(&mut self) -> &mut [f64] {
        &mut self.hidden_bias
    }

    pub fn decoder_bias(&self) -> &[f64] {
        &self.decoder_bias
    }

    pub fn decoder_bias_mut(&mut self) -> &mut [f64] {
        &mut self.decoder_bias
    }

    /// Row `unit` of the softmax weights `Φ`.
    pub fn output_row(&self, unit: usize) -> &[f64] {
        &self.output_weights[unit]
    }

    pub fn output_row_mut(&mut self, unit: usize) -> &mut [f64] {
        &mut self.output_weights[unit]
    }

    pub fn output_bias(&self) -> &[f64] {
        &self.output_bias
    }

    pub fn output_bias_mut(&mut self) -> &mut [f64] {
        &mut self.output_bias
    }

    /// `n·R + R + n + R·m + m`: W, b, c, Φ and η.
    pub fn parameter_count(&self) -> usize {
        let (n, r, m) = (self.n_features, self.n_hidden(), self.n_classes);
        n * r + r + n + r * m + m
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().flatten().all(|v| v.is_finite())
            && self.hidden_bias.iter().all(|v| v.is_finite())
            && self.decoder_bias.iter().all(|v| v.is_finite())
            && self.output_weights.iter().flatten().all(|v| v.is_finite())
            && self.output_bias.iter().all(|v| v.is_finite())
    }

    /// Encoder pre-activations `x·W + b`.
    pub(crate) fn hidden_preactivation(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.hidden_bias)
            .map(|(column, b)| dot(x, column) + b)
            .collect()
    }

    /// Decoder pre-activations `h·Wᵀ + c` for any hidden-space vector `h`.
    pub(crate) fn decoder_preactivation(&self, h: &[f64]) -> Vec<f64> {
        let mut a = self.decoder_bias.clone();
        for (column, &hi) in self.weights.iter().zip(h) {
            for (aj, wj) in a.iter_mut().zip(column) {
                *aj += hi * wj;
            }
        }
        a
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        let (n, r) = (self.n_features, self.n_hidden());
        let mut encoder_weights = Vec::with_capacity(n * r);
        for j in 0..n {
            for i in 0..r {
                encoder_weights.push(self.weights[i][j]);
            }
        }
        Checkpoint {
            version: Checkpoint::VERSION,
            n_features: n,
            n_hidden: r,
            n_classes: self.n_classes,
            encoder_weights,
            hidden_bias: self.hidden_bias.clone(),
            decoder_bias: self.decoder_bias.clone(),
            output_weights: self.output_weights.iter().flatten().copied().collect(),
            output_bias: self.output_bias.clone(),
        }
    }

    pub fn from_checkpoint(ck: &Checkpoint) -> Result<Self> {
        if ck.version != Checkpoint::VERSION {
            return Err(Error::CheckpointVersion(ck.version));
        }
        let (n, r, m) = (ck.n_features, ck.n_hidden, ck.n_classes);
        ensure_len(n * r, ck.encoder_weights.len())?;
        ensure_len(r * m, ck.output_weights.len())?;
        let weights = (0..r)
            .map(|i| (0..n).map(|j| ck.encoder_weights[j * r + i]).collect())
            .collect();
        let output_weights = ck
            .output_weights
            .chunks(m.max(1))
            .map(<[f64]>::to_vec)
            .collect();
        Self::from_parts(
            weights,
            ck.hidden_bias.clone(),
            ck.decoder_bias.clone(),
            output_weights,
            ck.output_bias.clone(),
        )
    }
}

/// Flat, versioned snapshot of a [`NetworkState`].
///
/// Fields serialize in declaration order. `encoder_weights` is `W` (n × R)
/// row-major, `output_weights` is `Φ` (R × m) row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub n_features: usize,
    pub n_hidden: usize,
    pub n_classes: usize,
    pub encoder_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub decoder_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: Vec<f64>,
}

impl Checkpoint {
    pub const VERSION: u32 = 1;

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y = s(x̃·W + b)`.
pub fn encode(x: &[f64], state: &NetworkState) -> Result<Vec<f64>> {
    ensure_len(state.n_features(), x.len())?;
    Ok(state
        .hidden_preactivation(x)
        .into_iter()
        .map(sigmoid)
        .collect())
}

/// `z = s(y·Wᵀ + c)`.
pub fn decode(y: &[f64], state: &NetworkState) -> Result<Vec<f64>> {
    ensure_len(state.n_hidden(), y.len())?;
    Ok(state
        .decoder_preactivation(y)
        .into_iter()
        .map(sigmoid)
        .collect())
}

/// Summed binary cross-entropy between a clean target `x` and reconstruction `z`.
pub fn reconstruction_loss(x: &[f64], z: &[f64]) -> Result<f64> {
    ensure_len(x.len(), z.len())?;
    Ok(x.iter()
        .zip(z)
        .map(|(&x, &z)| {
            let z = z.clamp(OUTPUT_CLAMP, 1.0 - OUTPUT_CLAMP);
            -(x * z.ln() + (1.0 - x) * (1.0 - z).ln())
        })
        .sum())
}

/// Loss of reconstructing `sample.clean` from `sample.corrupted`.
pub fn generative_loss(state: &NetworkState, sample: &CorruptedSample) -> Result<f64> {
    let y = encode(&sample.corrupted, state)?;
    let z = decode(&y, state)?;
    reconstruction_loss(&sample.clean, &z)
}

/// Gradient of [`generative_loss`] with respect to `W`, `b` and `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerativeGradient {
    /// `∂L/∂W`, laid out like [`NetworkState`]: one n-vector per hidden unit.
    pub weights: Vec<Vec<f64>>,
    pub hidden_bias: Vec<f64>,
    pub decoder_bias: Vec<f64>,
}

pub fn generative_gradient(
    state: &NetworkState,
    sample: &CorruptedSample,
) -> Result<GenerativeGradient> {
    ensure_len(state.n_features(), sample.clean.len())?;
    let y = encode(&sample.corrupted, state)?;
    let z = decode(&y, state)?;
    // Sigmoid output with cross-entropy: ∂L/∂a_out = z - x.
    let delta_out: Vec<f64> = z
        .iter()
        .zip(&sample.clean)
        .map(|(&z, &x)| z.clamp(OUTPUT_CLAMP, 1.0 - OUTPUT_CLAMP) - x)
        .collect();
    let delta_hidden: Vec<f64> = state
        .weights
        .iter()
        .zip(&y)
        .map(|(column, &yi)| dot(column, &delta_out) * yi * (1.0 - yi))
        .collect();
    // Tied weight: encoder path x̃[j]·δ_hidden[i] plus decoder path y[i]·δ_out[j].
    let weights = delta_hidden
        .iter()
        .zip(&y)
        .map(|(&dh, &yi)| {
            sample
                .corrupted
                .iter()
                .zip(&delta_out)
                .map(|(&xj, &dj)| xj * dh + yi * dj)
                .collect()
        })
        .collect();
    Ok(GenerativeGradient {
        weights,
        hidden_bias: delta_hidden,
        decoder_bias: delta_out,
    })
}

impl GenerativeGradient {
    pub fn is_finite(&self) -> bool {
        self.weights.iter().flatten().all(|g| g.is_finite())
            && self.hidden_bias.iter().all(|g| g.is_finite())
            && self.decoder_bias.iter().all(|g| g.is_finite())
    }

    /// `θ ← θ - lr·∇θ` for `W`, `b` and `c`.
    pub fn apply(&self, state: &mut NetworkState, lr: f64) {
        for (column, g) in state.weights.iter_mut().zip(&self.weights) {
            for (w, g) in column.iter_mut().zip(g) {
                *w -= lr * g;
            }
        }
        for (b, g) in state.hidden_bias.iter_mut().zip(&self.hidden_bias) {
            *b -= lr * g;
        }
        for (c, g) in state.decoder_bias.iter_mut().zip(&self.decoder_bias) {
            *c -= lr * g;
        }
    }
}

/// One SGD step on `W`, `b`, `c` for a single corrupted sample.
pub fn generative_sgd_step(
    state: &mut NetworkState,
    sample: &CorruptedSample,
    lr: f64,
) -> Result<()> {
    generative_gradient(state, sample)?.apply(state, lr);
    Ok(())
}
