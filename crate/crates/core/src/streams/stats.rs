use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};

/// Per-feature running mean and population standard deviation (Welford).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl RunningStats {
    pub fn new(dim: usize) -> Self {
        RunningStats {
            count: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn update(&mut self, x: &[f64]) -> Result<()> {
        ensure_len(self.dim(), x.len())?;
        self.count += 1;
        let n = self.count as f64;
        for ((mean, m2), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *mean;
            *mean += delta / n;
            *m2 += delta * (v - *mean);
        }
        Ok(())
    }

    pub fn mean(&self) -> Result<&[f64]> {
        self.require(1)?;
        Ok(&self.mean)
    }

    /// Population standard deviation (divide by count).
    pub fn std(&self) -> Result<Vec<f64>> {
        self.require(1)?;
        let n = self.count as f64;
        Ok(self.m2.iter().map(|m2| (m2 / n).max(0.0).sqrt()).collect())
    }

    pub(crate) fn require(&self, required: u64) -> Result<()> {
        if self.count < required {
            Err(Error::InsufficientSamples {
                count: self.count,
                required,
            })
        } else {
            Ok(())
        }
    }
}
