//! Softmax head on top of the encoder and its single-sample supervised step.

use crate::dae::{dot, encode, NetworkState, OUTPUT_CLAMP};
use crate::error::{ensure_len, Result};
use crate::math::{argmax, softmax};
use crate::significance::{bias_variance, expected_hidden, ProbitForm};
use crate::streams::RunningStats;

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub probabilities: Vec<f64>,
    /// Most probable class; ties go to the lowest index.
    pub class: usize,
}

/// Logits `h·Φ + η` for a hidden-space vector `h`.
fn logits(h: &[f64], state: &NetworkState) -> Vec<f64> {
    let mut out = state.output_bias.clone();
    for (row, &hi) in state.output_weights.iter().zip(h) {
        for (o, w) in out.iter_mut().zip(row) {
            *o += hi * w;
        }
    }
    out
}

/// `softmax(s(x·W + b)·Φ + η)` on a clean input.
pub fn predict(x: &[f64], state: &NetworkState) -> Result<Prediction> {
    let y = encode(x, state)?;
    let probabilities = softmax(&logits(&y, state));
    let class = argmax(&probabilities);
    Ok(Prediction {
        probabilities,
        class,
    })
}

/// Cross-entropy between a target distribution and the prediction for `x`.
pub fn discriminative_loss(state: &NetworkState, x: &[f64], target: &[f64]) -> Result<f64> {
    ensure_len(state.n_classes(), target.len())?;
    let p = predict(x, state)?.probabilities;
    Ok(-target
        .iter()
        .zip(&p)
        .map(|(t, p)| t * p.max(OUTPUT_CLAMP).ln())
        .sum::<f64>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminativeGradient {
    /// `∂L/∂W`, one n-vector per hidden unit.
    pub weights: Vec<Vec<f64>>,
    pub hidden_bias: Vec<f64>,
    /// `∂L/∂Φ`, one m-vector per hidden unit.
    pub output_weights: Vec<Vec<f64>>,
    pub output_bias: Vec<f64>,
}

pub fn discriminative_gradient(
    state: &NetworkState,
    x: &[f64],
    target: &[f64],
) -> Result<DiscriminativeGradient> {
    ensure_len(state.n_classes(), target.len())?;
    let y = encode(x, state)?;
    let p = softmax(&logits(&y, state));
    // Softmax with cross-entropy: ∂L/∂logit = p - t (for targets summing to 1).
    let delta_out: Vec<f64> = p.iter().zip(target).map(|(p, t)| p - t).collect();
    let delta_hidden: Vec<f64> = state
        .output_weights
        .iter()
        .zip(&y)
        .map(|(row, &yi)| dot(row, &delta_out) * yi * (1.0 - yi))
        .collect();
    Ok(DiscriminativeGradient {
        weights: delta_hidden
            .iter()
            .map(|&dh| x.iter().map(|&xj| xj * dh).collect())
            .collect(),
        output_weights: y
            .iter()
            .map(|&yi| delta_out.iter().map(|&d| yi * d).collect())
            .collect(),
        hidden_bias: delta_hidden,
        output_bias: delta_out,
    })
}

impl DiscriminativeGradient {
    pub fn is_finite(&self) -> bool {
        self.weights.iter().flatten().all(|g| g.is_finite())
            && self.hidden_bias.iter().all(|g| g.is_finite())
            && self.output_weights.iter().flatten().all(|g| g.is_finite())
            && self.output_bias.iter().all(|g| g.is_finite())
    }

    /// `θ ← θ - lr·∇θ` for `W`, `b`, `Φ` and `η`.
    pub fn apply(&self, state: &mut NetworkState, lr: f64) {
        for (column, g) in state.weights.iter_mut().zip(&self.weights) {
            for (w, g) in column.iter_mut().zip(g) {
                *w -= lr * g;
            }
        }
        for (b, g) in state.hidden_bias.iter_mut().zip(&self.hidden_bias) {
            *b -= lr * g;
        }
        for (row, g) in state.output_weights.iter_mut().zip(&self.output_weights) {
            for (w, g) in row.iter_mut().zip(g) {
                *w -= lr * g;
            }
        }
        for (e, g) in state.output_bias.iter_mut().zip(&self.output_bias) {
            *e -= lr * g;
        }
    }
}

/// One SGD step on `W`, `b`, `Φ`, `η` for a single labelled sample.
pub fn discriminative_sgd_step(
    state: &mut NetworkState,
    x: &[f64],
    target: &[f64],
    lr: f64,
) -> Result<()> {
    discriminative_gradient(state, x, target)?.apply(state, lr);
    Ok(())
}

/// Bias²/variance of the softmax output against a one-hot target.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminativeNs {
    pub expected_output: Vec<f64>,
    pub expected_output_sq: Vec<f64>,
    pub bias_sq: f64,
    pub variance: f64,
    pub clamped: usize,
}

/// Predictive significance: `E[out] = softmax(E[y]·Φ + η)` and
/// `E[out²] = softmax((E[y] ⊙ E[y])·Φ + η)`, reduced by the mean over classes.
pub fn discriminative_ns(
    target: &[f64],
    stats: &RunningStats,
    state: &NetworkState,
    form: ProbitForm,
) -> Result<DiscriminativeNs> {
    ensure_len(state.n_classes(), target.len())?;
    let ey = expected_hidden(stats, state, form)?;
    let ey_sq: Vec<f64> = ey.iter().map(|e| e * e).collect();
    let expected_output = softmax(&logits(&ey, state));
    let expected_output_sq = softmax(&logits(&ey_sq, state));
    let (bias_sq, variance, clamped) = bias_variance(target, &expected_output, &expected_output_sq);
    Ok(DiscriminativeNs {
        expected_output,
        expected_output_sq,
        bias_sq,
        variance,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, r: usize, m: usize, seed: u64) -> NetworkState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = NetworkState::zeros(n, r, m).unwrap();
        for i in 0..r {
            for w in s.weight_column_mut(i) {
                *w = rng.random_range(-1.0..1.0);
            }
            for p in s.output_row_mut(i) {
                *p = rng.random_range(-1.0..1.0);
            }
        }
        for b in s.hidden_bias_mut() {
            *b = rng.random_range(-1.0..1.0);
        }
        for e in s.output_bias_mut() {
            *e = rng.random_range(-1.0..1.0);
        }
        s
    }

    #[test]
    fn zero_head_is_uniform() {
        let s = NetworkState::zeros(3, 2, 4).unwrap();
        let p = predict(&[0.1, 0.5, 0.9], &s).unwrap();
        assert_eq!(p.probabilities, vec![0.25; 4]);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn dominant_logit_wins() {
        let mut s = NetworkState::zeros(2, 1, 3).unwrap();
        s.output_bias_mut()[0] = 10.0;
        let p = predict(&[0.3, 0.3], &s).unwrap();
        assert!(p.probabilities[0] > 0.999);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn predict_matches_scalar_loop() {
        let s = random_state(4, 3, 3, 1);
        let x = [0.2, 0.9, 0.4, 0.6];
        let p = predict(&x, &s).unwrap();
        let mut y = [0.0; 3];
        for i in 0..3 {
            let mut a = s.hidden_bias()[i];
            for j in 0..4 {
                a += x[j] * s.weight(j, i);
            }
            y[i] = 1.0 / (1.0 + (-a).exp());
        }
        let mut e = [0.0; 3];
        for o in 0..3 {
            let mut l = s.output_bias()[o];
            for i in 0..3 {
                l += y[i] * s.output_row(i)[o];
            }
            e[o] = l.exp();
        }
        let total: f64 = e.iter().sum();
        for o in 0..3 {
            assert!((p.probabilities[o] - e[o] / total).abs() < 1e-12);
        }
        assert!((p.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let mut s = random_state(3, 2, 2, 2);
        let before = s.clone();
        discriminative_sgd_step(&mut s, &[0.1, 0.2, 0.3], &[0.0, 1.0], 0.0).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn repeated_steps_fit_one_point() {
        let mut s = random_state(3, 2, 2, 3);
        let x = [0.7, 0.1, 0.4];
        let t = [0.0, 1.0];
        for _ in 0..200 {
            discriminative_sgd_step(&mut s, &x, &t, 0.1).unwrap();
        }
        let loss = discriminative_loss(&s, &x, &t).unwrap();
        assert!(loss < 0.05, "loss {loss}");
    }

    #[test]
    fn uniform_head_bias_for_binary_target() {
        let mut stats = RunningStats::new(2);
        stats.update(&[0.1, 0.2]).unwrap();
        stats.update(&[0.5, 0.9]).unwrap();
        let s = NetworkState::zeros(2, 3, 2).unwrap();
        let ns = discriminative_ns(&[1.0, 0.0], &stats, &s, ProbitForm::default()).unwrap();
        assert_eq!(ns.expected_output, vec![0.5, 0.5]);
        assert!((ns.bias_sq - 0.25).abs() < 1e-15);
        let exact = ns.expected_output.clone();
        let ns = discriminative_ns(&exact, &stats, &s, ProbitForm::default()).unwrap();
        assert_eq!(ns.bias_sq, 0.0);
    }

    #[test]
    fn checks_target_dimension() {
        let s = NetworkState::zeros(2, 1, 3).unwrap();
        assert!(discriminative_gradient(&s, &[0.1, 0.1], &[1.0, 0.0]).is_err());
    }
}
