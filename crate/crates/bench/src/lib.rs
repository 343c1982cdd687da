//! Fixtures shared by the criterion benches.

use devdan_core::learner::{LearnerConfig, StepContext};
use devdan_core::streams::{LabeledSample, SeaConfig, SeaGenerator};
use devdan_core::{Learner, Variant};

/// `count` SEA samples from a fixed seed.
pub fn sea_samples(count: usize) -> Vec<LabeledSample> {
    SeaGenerator::new(&SeaConfig {
        samples: count,
        seed: 17,
        ..Default::default()
    })
    .expect("valid SEA config")
    .collect()
}

/// A learner already trained on `warmup` samples so benches run against a
/// network with a realistic number of hidden units.
pub fn warmed_learner(variant: Variant, warmup: &[LabeledSample]) -> Learner {
    let config = LearnerConfig {
        variant,
        ..Default::default()
    };
    let mut learner = Learner::new(3, 2, config, 17).expect("valid learner config");
    for (i, s) in warmup.iter().enumerate() {
        let ctx = StepContext {
            timestamp: 0,
            step: i,
            sample: i,
        };
        learner
            .train_generative(&s.features, ctx)
            .expect("training step");
        learner
            .train_discriminative(&s.features, s.label, ctx)
            .expect("training step");
    }
    learner
}
