use rand::Rng;

/// A clean input together with its masked copy.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptedSample {
    pub clean: Vec<f64>,
    pub corrupted: Vec<f64>,
    /// `true` where the feature was zeroed.
    pub mask: Vec<bool>,
}

impl CorruptedSample {
    /// No corruption: `corrupted == clean`.
    pub fn clean(x: &[f64]) -> Self {
        CorruptedSample {
            clean: x.to_vec(),
            corrupted: x.to_vec(),
            mask: vec![false; x.len()],
        }
    }

    pub fn masked(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Number of features zeroed for a given corruption probability.
pub fn masked_count(corruption_prob: f64, n: usize) -> usize {
    ((corruption_prob * n as f64).round() as usize).min(n)
}

/// Masking noise: zeroes exactly `round(p·n)` distinct features drawn
/// uniformly without replacement. A fresh subset is drawn on every call.
pub fn mask_noise<R: Rng + ?Sized>(
    x: &[f64],
    corruption_prob: f64,
    rng: &mut R,
) -> CorruptedSample {
    let mut sample = CorruptedSample::clean(x);
    let k = masked_count(corruption_prob, x.len());
    if k == 0 {
        return sample;
    }
    for i in rand::seq::index::sample(rng, x.len(), k) {
        sample.mask[i] = true;
        sample.corrupted[i] = 0.0;
    }
    sample
}
