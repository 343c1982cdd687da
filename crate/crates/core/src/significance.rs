//! Closed-form network significance: the expected squared reconstruction
//! error split into bias² and variance, under a Gaussian model of the
//! corrupted inputs.
//!
//! The expectation of a sigmoid unit under Gaussian inputs uses the probit
//! approximation `s(a) ≈ Φ(ξa)` with `ξ² = π/8`, giving
//! `E[s(a)] ≈ s(E[a] / sqrt(1 + ξ²·Var[a]))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dae::NetworkState;
use crate::error::{ensure_len, Result};
use crate::math::{mean, sigmoid};
use crate::streams::RunningStats;

/// `ξ²` in the probit approximation of the sigmoid.
pub const PROBIT_XI_SQ: f64 = PI / 8.0;

/// How the input spread enters the expected hidden activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbitForm {
    /// Spread of the whole pre-activation `a_i = Σ_j x̃_j W_ji + b_i`, with
    /// independent features: `s((μ·W_i + b_i) / sqrt(1 + ξ²·Σ_j σ_j² W_ji²))`.
    #[default]
    PreActivation,
    /// Each input mean is shrunk by its own spread before the affine map:
    /// `s(Σ_j μ_j / sqrt(1 + ξ²σ_j²) · W_ji + b_i)`. Ignores the weights'
    /// contribution to the pre-activation variance.
    InputScaled,
}

/// Closed-form expectations and the resulting bias²/variance scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct NsEstimate {
    pub expected_hidden: Vec<f64>,
    pub expected_output: Vec<f64>,
    pub expected_output_sq: Vec<f64>,
    /// Mean over features of `(E[z] - x)²`.
    pub bias_sq: f64,
    /// Mean over features of `max(0, E[z²] - E[z]²)`.
    pub variance: f64,
    /// Features whose raw variance came out negative and was clamped to 0.
    pub clamped: usize,
}

impl NsEstimate {
    pub fn significance(&self) -> f64 {
        self.bias_sq + self.variance
    }
}

/// `E[y]` for every hidden unit. Needs at least two observed inputs.
pub fn expected_hidden(
    stats: &RunningStats,
    state: &NetworkState,
    form: ProbitForm,
) -> Result<Vec<f64>> {
    ensure_len(state.n_features(), stats.dim())?;
    stats.require(2)?;
    let mu = stats.mean()?;
    let sigma = stats.std()?;
    let out = match form {
        ProbitForm::PreActivation => state
            .weights
            .iter()
            .zip(&state.hidden_bias)
            .map(|(column, &b)| {
                let mut m = b;
                let mut v = 0.0;
                for ((&w, &mu), &sd) in column.iter().zip(mu).zip(&sigma) {
                    m += mu * w;
                    v += sd * sd * w * w;
                }
                sigmoid(m / (1.0 + PROBIT_XI_SQ * v).sqrt())
            })
            .collect(),
        ProbitForm::InputScaled => {
            let scaled: Vec<f64> = mu
                .iter()
                .zip(&sigma)
                .map(|(&mu, &sd)| mu / (1.0 + PROBIT_XI_SQ * sd * sd).sqrt())
                .collect();
            state
                .hidden_preactivation(&scaled)
                .into_iter()
                .map(sigmoid)
                .collect()
        }
    };
    Ok(out)
}

/// `E[z] = s(E[y]·Wᵀ + c)`.
pub fn expected_output(expected_hidden: &[f64], state: &NetworkState) -> Result<Vec<f64>> {
    crate::dae::decode(expected_hidden, state)
}

/// `E[z²] = s((E[y] ⊙ E[y])·Wᵀ + c)`, treating `y·y` as a product of
/// independent copies.
pub fn expected_output_sq(expected_hidden: &[f64], state: &NetworkState) -> Result<Vec<f64>> {
    let squared: Vec<f64> = expected_hidden.iter().map(|e| e * e).collect();
    crate::dae::decode(&squared, state)
}

/// Generative-phase network significance for clean input `x`.
pub fn ns_estimate(
    x: &[f64],
    stats: &RunningStats,
    state: &NetworkState,
    form: ProbitForm,
) -> Result<NsEstimate> {
    ensure_len(state.n_features(), x.len())?;
    let expected_hidden = expected_hidden(stats, state, form)?;
    let expected_output = expected_output(&expected_hidden, state)?;
    let expected_output_sq = expected_output_sq(&expected_hidden, state)?;
    let (bias_sq, variance, clamped) = bias_variance(x, &expected_output, &expected_output_sq);
    Ok(NsEstimate {
        expected_hidden,
        expected_output,
        expected_output_sq,
        bias_sq,
        variance,
        clamped,
    })
}

/// Per-unit significance: the expected encoder activation. Only the encoder
/// is consulted; the decoder plays no part in ranking units.
pub fn hidden_significance(
    stats: &RunningStats,
    state: &NetworkState,
    form: ProbitForm,
) -> Result<Vec<f64>> {
    expected_hidden(stats, state, form)
}

/// Reduces per-component expectations to scalar bias² and variance by the
/// arithmetic mean, clamping negative variances at zero.
pub(crate) fn bias_variance(
    target: &[f64],
    expected: &[f64],
    expected_sq: &[f64],
) -> (f64, f64, usize) {
    let bias: Vec<f64> = expected
        .iter()
        .zip(target)
        .map(|(e, t)| (e - t).powi(2))
        .collect();
    let mut clamped = 0;
    let var: Vec<f64> = expected_sq
        .iter()
        .zip(expected)
        .map(|(e2, e)| {
            let v = e2 - e * e;
            if v < 0.0 {
                clamped += 1;
                0.0
            } else {
                v
            }
        })
        .collect();
    (mean(&bias), mean(&var), clamped)
}
