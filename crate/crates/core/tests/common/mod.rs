#![allow(dead_code)]

use devdan_core::dae::{generative_gradient, generative_loss};
use devdan_core::discriminative::{discriminative_gradient, discriminative_loss};
use devdan_core::streams::mask_noise;
use devdan_core::{CorruptedSample, NetworkState, RunningStats};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const FD_STEP: f64 = 1e-6;
/// Gradients smaller than this are compared in absolute terms; below it the
/// central difference is dominated by float cancellation.
pub const FD_FLOOR: f64 = 1e-3;

pub fn random_state(n: usize, r: usize, m: usize, rng: &mut impl Rng) -> NetworkState {
    let mut uniform = |scale: f64, len: usize| -> Vec<f64> {
        (0..len)
            .map(|_| scale * rng.random_range(-1.0..=1.0))
            .collect()
    };
    NetworkState::from_parts(
        (0..r).map(|_| uniform(1.5, n)).collect(),
        uniform(1.0, r),
        uniform(1.0, n),
        (0..r).map(|_| uniform(1.5, m)).collect(),
        uniform(1.0, m),
    )
    .unwrap()
}

/// Scalar parameter `k` in the flat order W, b, c, Φ, η.
pub fn param_mut(state: &mut NetworkState, mut k: usize) -> &mut f64 {
    let (n, r, m) = (state.n_features(), state.n_hidden(), state.n_classes());
    if k < n * r {
        return &mut state.weight_column_mut(k / n)[k % n];
    }
    k -= n * r;
    if k < r {
        return &mut state.hidden_bias_mut()[k];
    }
    k -= r;
    if k < n {
        return &mut state.decoder_bias_mut()[k];
    }
    k -= n;
    if k < r * m {
        return &mut state.output_row_mut(k / m)[k % m];
    }
    k -= r * m;
    &mut state.output_bias_mut()[k]
}

/// Largest relative error between `analytic` and central differences of `loss`.
pub fn max_fd_error(
    state: &NetworkState,
    analytic: &[f64],
    loss: impl Fn(&NetworkState) -> f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, &a) in analytic.iter().enumerate() {
        let mut plus = state.clone();
        *param_mut(&mut plus, k) += FD_STEP;
        let mut minus = state.clone();
        *param_mut(&mut minus, k) -= FD_STEP;
        let numeric = (loss(&plus) - loss(&minus)) / (2.0 * FD_STEP);
        let err = (a - numeric).abs() / a.abs().max(numeric.abs()).max(FD_FLOOR);
        worst = worst.max(err);
    }
    worst
}

pub fn generative_fd_error(state: &NetworkState, sample: &CorruptedSample) -> f64 {
    let g = generative_gradient(state, sample).unwrap();
    let (r, m) = (state.n_hidden(), state.n_classes());
    let mut flat: Vec<f64> = g.weights.concat();
    flat.extend(&g.hidden_bias);
    flat.extend(&g.decoder_bias);
    flat.extend(std::iter::repeat_n(0.0, r * m + m));
    max_fd_error(state, &flat, |s| generative_loss(s, sample).unwrap())
}

pub fn discriminative_fd_error(state: &NetworkState, x: &[f64], target: &[f64]) -> f64 {
    let g = discriminative_gradient(state, x, target).unwrap();
    let mut flat: Vec<f64> = g.weights.concat();
    flat.extend(&g.hidden_bias);
    flat.extend(std::iter::repeat_n(0.0, state.n_features()));
    flat.extend(g.output_weights.concat());
    flat.extend(&g.output_bias);
    max_fd_error(state, &flat, |s| discriminative_loss(s, x, target).unwrap())
}

/// Worst generative and discriminative finite-difference errors for the
/// random network drawn from `seed`.
pub fn fd_errors(n: usize, r: usize, m: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = random_state(n, r, m, &mut rng);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
    let sample = mask_noise(&x, 0.3, &mut rng);
    let label = rng.random_range(0..m);
    let target: Vec<f64> = (0..m).map(|k| if k == label { 1.0 } else { 0.0 }).collect();
    (
        generative_fd_error(&state, &sample),
        discriminative_fd_error(&state, &x, &target),
    )
}

/// Running statistics with exactly the given per-feature mean and
/// population standard deviation.
pub fn stats_with(mu: &[f64], sigma: &[f64]) -> RunningStats {
    let mut stats = RunningStats::new(mu.len());
    let lo: Vec<f64> = mu.iter().zip(sigma).map(|(m, s)| m - s).collect();
    let hi: Vec<f64> = mu.iter().zip(sigma).map(|(m, s)| m + s).collect();
    stats.update(&lo).unwrap();
    stats.update(&hi).unwrap();
    stats
}

pub fn sigmoid(a: f64) -> f64 {
    1.0 / (1.0 + (-a).exp())
}

pub fn standard_normals(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect()
}

/// Monte-Carlo mean of `f(x̃)` with `x̃ ~ N(mu, diag(sigma²))`.
pub fn monte_carlo(
    mu: &[f64],
    sigma: &[f64],
    draws: usize,
    seed: u64,
    mut f: impl FnMut(&[f64]) -> Vec<f64>,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; mu.len()];
    let mut total: Vec<f64> = Vec::new();
    for _ in 0..draws {
        for ((x, m), s) in x.iter_mut().zip(mu).zip(sigma) {
            let e: f64 = StandardNormal.sample(&mut rng);
            *x = m + s * e;
        }
        let v = f(&x);
        if total.is_empty() {
            total = vec![0.0; v.len()];
        }
        for (t, v) in total.iter_mut().zip(v) {
            *t += v;
        }
    }
    total.iter().map(|t| t / draws as f64).collect()
}
