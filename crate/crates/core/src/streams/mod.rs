//! Data sources and per-sample preprocessing.
//!
//! Streams yield one [`LabeledSample`] at a time with features already
//! normalized into `[0, 1]`. [`Batches`] groups them into timestamped
//! [`DataBatch`]es for the prequential driver.

mod csv_source;
mod noise;
mod stats;
mod synthetic;

pub use csv_source::{load_csv, CsvOptions, CsvStream};
pub use noise::{mask_noise, masked_count, CorruptedSample};
pub use stats::RunningStats;
pub use synthetic::{
    hyperplane_label, sea_label, HyperplaneConfig, HyperplaneGenerator, SeaConfig, SeaGenerator,
    DEFAULT_SEA_THRESHOLDS,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: usize,
}

/// A finite source of labelled samples with a fixed input dimension and class count.
pub trait DataStream: Iterator<Item = LabeledSample> {
    fn n_features(&self) -> usize;
    fn n_classes(&self) -> usize;
}

impl<S: DataStream + ?Sized> DataStream for Box<S> {
    fn n_features(&self) -> usize {
        (**self).n_features()
    }
    fn n_classes(&self) -> usize {
        (**self).n_classes()
    }
}

/// One timestamp worth of samples. Labels travel with the batch, but the
/// learner only sees them after the batch has been scored and used for
/// generative training.
#[derive(Debug, Clone, PartialEq)]
pub struct DataBatch {
    pub index: usize,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl DataBatch {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Chunks a sample stream into batches of `batch_size`; the last batch may be short.
pub struct Batches<S> {
    stream: S,
    batch_size: usize,
    next_index: usize,
}

impl<S: DataStream> Batches<S> {
    pub fn new(stream: S, batch_size: usize) -> Result<Self> {
        if batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        Ok(Batches {
            stream,
            batch_size,
            next_index: 0,
        })
    }

    pub fn n_features(&self) -> usize {
        self.stream.n_features()
    }

    pub fn n_classes(&self) -> usize {
        self.stream.n_classes()
    }
}

impl<S: DataStream> Iterator for Batches<S> {
    type Item = DataBatch;

    fn next(&mut self) -> Option<DataBatch> {
        let mut features = Vec::with_capacity(self.batch_size);
        let mut labels = Vec::with_capacity(self.batch_size);
        for sample in self.stream.by_ref().take(self.batch_size) {
            features.push(sample.features);
            labels.push(sample.label);
        }
        if features.is_empty() {
            return None;
        }
        let batch = DataBatch {
            index: self.next_index,
            features,
            labels,
        };
        self.next_index += 1;
        Some(batch)
    }
}

/// Min-max scales `x` into `[0, 1]` per feature, clamping out-of-range values.
/// A degenerate range (`min == max`) maps to 0.5.
pub fn normalize(x: &[f64], ranges: &[(f64, f64)]) -> Result<Vec<f64>> {
    crate::error::ensure_len(ranges.len(), x.len())?;
    Ok(x.iter()
        .zip(ranges)
        .map(|(&v, &(lo, hi))| {
            let span = hi - lo;
            if span <= 0.0 {
                0.5
            } else {
                ((v - lo) / span).clamp(0.0, 1.0)
            }
        })
        .collect())
}

/// 0-1 target encoding.
pub fn one_hot(label: usize, classes: usize) -> Result<Vec<f64>> {
    if label >= classes {
        return Err(Error::InvalidLabel { label, classes });
    }
    let mut target = vec![0.0; classes];
    target[label] = 1.0;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[5.0], &[(0.0, 10.0)]).unwrap(), vec![0.5]);
        assert_eq!(normalize(&[-3.0], &[(0.0, 10.0)]).unwrap(), vec![0.0]);
        assert_eq!(normalize(&[12.0], &[(0.0, 10.0)]).unwrap(), vec![1.0]);
        assert_eq!(normalize(&[4.0], &[(4.0, 4.0)]).unwrap(), vec![0.5]);
        assert!(matches!(
            normalize(&[1.0, 2.0], &[(0.0, 1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn one_hot_examples() {
        assert_eq!(one_hot(2, 4).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(one_hot(0, 1).unwrap(), vec![1.0]);
        assert!(matches!(
            one_hot(4, 4),
            Err(Error::InvalidLabel {
                label: 4,
                classes: 4
            })
        ));
    }

    struct Fixed(std::vec::IntoIter<LabeledSample>);

    impl Iterator for Fixed {
        type Item = LabeledSample;
        fn next(&mut self) -> Option<LabeledSample> {
            self.0.next()
        }
    }

    impl DataStream for Fixed {
        fn n_features(&self) -> usize {
            1
        }
        fn n_classes(&self) -> usize {
            2
        }
    }

    #[test]
    fn batches_keep_a_short_tail() {
        let samples: Vec<_> = (0..5)
            .map(|i| LabeledSample {
                features: vec![i as f64 / 5.0],
                label: i % 2,
            })
            .collect();
        let sizes: Vec<_> = Batches::new(Fixed(samples.into_iter()), 2)
            .unwrap()
            .map(|b| (b.index, b.len()))
            .collect();
        assert_eq!(sizes, vec![(0, 2), (1, 2), (2, 1)]);
    }

    #[test]
    fn zero_batch_size_is_rejected() {
        assert!(Batches::new(Fixed(Vec::new().into_iter()), 0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn normalize_is_idempotent_on_unit_ranges(x in proptest::collection::vec(-2.0f64..3.0, 1..10)) {
            let ranges = vec![(0.0, 1.0); x.len()];
            let once = normalize(&x, &ranges).unwrap();
            let twice = normalize(&once, &ranges).unwrap();
            proptest::prop_assert_eq!(&once, &twice);
            proptest::prop_assert!(once.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
