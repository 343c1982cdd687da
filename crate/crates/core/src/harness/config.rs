use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learner::{LearnerConfig, Variant};
use crate::significance::ProbitForm;
use crate::streams::{
    load_csv, CsvOptions, DataStream, HyperplaneConfig, HyperplaneGenerator, SeaConfig,
    SeaGenerator, DEFAULT_SEA_THRESHOLDS,
};

fn default_samples() -> usize {
    100_000
}

fn default_thresholds() -> Vec<f64> {
    DEFAULT_SEA_THRESHOLDS.to_vec()
}

fn default_features() -> usize {
    HyperplaneConfig::default().features
}

fn default_drift() -> f64 {
    HyperplaneConfig::default().drift
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatasetSpec {
    Sea {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_thresholds")]
        thresholds: Vec<f64>,
        #[serde(default)]
        noise: f64,
    },
    Hyperplane {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_features")]
        features: usize,
        #[serde(default = "default_drift")]
        drift: f64,
    },
    Csv {
        path: PathBuf,
        #[serde(default)]
        label_column: usize,
        #[serde(default)]
        classes: Option<usize>,
        #[serde(default)]
        header: bool,
    },
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec::Sea {
            samples: default_samples(),
            thresholds: default_thresholds(),
            noise: 0.0,
        }
    }
}

impl DatasetSpec {
    pub fn name(&self) -> String {
        match self {
            DatasetSpec::Sea { .. } => "sea".into(),
            DatasetSpec::Hyperplane { .. } => "hyperplane".into(),
            DatasetSpec::Csv { path, .. } => path.display().to_string(),
        }
    }

    /// Opens the stream; synthetic generators are seeded with `seed`.
    pub fn open(&self, seed: u64) -> Result<Box<dyn DataStream>> {
        Ok(match self {
            DatasetSpec::Sea {
                samples,
                thresholds,
                noise,
            } => Box::new(SeaGenerator::new(&SeaConfig {
                samples: *samples,
                thresholds: thresholds.clone(),
                noise: *noise,
                seed,
            })?),
            DatasetSpec::Hyperplane {
                samples,
                features,
                drift,
            } => Box::new(HyperplaneGenerator::new(&HyperplaneConfig {
                samples: *samples,
                features: *features,
                drift: *drift,
                seed,
            })?),
            DatasetSpec::Csv {
                path,
                label_column,
                classes,
                header,
            } => Box::new(load_csv(
                path,
                &CsvOptions {
                    label_column: *label_column,
                    classes: *classes,
                    header: *header,
                },
            )?),
        })
    }
}

/// Everything needed to reproduce one prequential run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub batch_size: usize,
    pub corruption: f64,
    pub lr_generative: f64,
    pub lr_discriminative: f64,
    pub seed: u64,
    pub variant: Variant,
    /// Hidden units of the fixed variants.
    pub hidden: usize,
    pub probit: ProbitForm,
    /// Measure wall-clock time per batch. When off, elapsed time is reported as 0.
    pub timing: bool,
    pub trace: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let learner = LearnerConfig::default();
        ExperimentConfig {
            dataset: DatasetSpec::default(),
            batch_size: 500,
            corruption: learner.corruption,
            lr_generative: learner.lr_generative,
            lr_discriminative: learner.lr_discriminative,
            seed: 0,
            variant: learner.variant,
            hidden: learner.hidden,
            probit: learner.probit,
            timing: true,
            trace: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.corruption) {
            return Err(Error::Config(format!(
                "corruption probability must lie in [0, 1), got {}",
                self.corruption
            )));
        }
        if !(self.lr_generative > 0.0 && self.lr_discriminative > 0.0) {
            return Err(Error::Config("learning rates must be positive".into()));
        }
        if !self.variant.evolves() && self.hidden == 0 {
            return Err(Error::Config("fixed variants need --hidden >= 1".into()));
        }
        Ok(())
    }

    pub fn learner_config(&self) -> LearnerConfig {
        LearnerConfig {
            variant: self.variant,
            corruption: self.corruption,
            lr_generative: self.lr_generative,
            lr_discriminative: self.lr_discriminative,
            hidden: self.hidden,
            probit: self.probit,
            trace: self.trace,
        }
    }
}
