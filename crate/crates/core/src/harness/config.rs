//! Experiment grid configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::PdeKind;
use crate::error::{Error, Result};
use crate::harness::preset::{Preset, PresetOverrides};

pub const DEFAULT_TRIALS_PER_CELL: usize = 12;

/// Environment variable selecting the worker-pool size.
pub const WORKERS_ENV: &str = "PDE_DISCOVERY_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pde: PdeKind,
    pub sample_sizes: Vec<usize>,
    pub noise_levels: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials_per_cell: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<PresetOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epoch_checkpoints: Option<Vec<usize>>,
}

fn default_trials() -> usize {
    DEFAULT_TRIALS_PER_CELL
}

impl ExperimentConfig {
    pub fn new(pde: PdeKind, sample_sizes: Vec<usize>, noise_levels: Vec<f64>) -> Self {
        ExperimentConfig {
            pde,
            sample_sizes,
            noise_levels,
            trials_per_cell: DEFAULT_TRIALS_PER_CELL,
            base_seed: 0,
            overrides: None,
            epoch_checkpoints: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_cell == 0 {
            return Err(Error::Config("trials_per_cell must be >= 1".into()));
        }
        if self.sample_sizes.contains(&0) {
            return Err(Error::Config("sample sizes must be >= 1".into()));
        }
        if let Some(bad) = self.noise_levels.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Config(format!("noise levels must be >= 0, got {bad}")));
        }
        self.preset()?;
        Ok(())
    }

    /// The equation's preset with this config's overrides applied.
    pub fn preset(&self) -> Result<Preset> {
        let base = Preset::for_pde(self.pde);
        let preset = match &self.overrides {
            Some(o) => base.with_overrides(o)?,
            None => base,
        };
        if let Some(c) = &self.epoch_checkpoints {
            if c.windows(2).any(|w| w[0] >= w[1]) || c.last().is_some_and(|&l| l > preset.train.epochs) {
                return Err(Error::Config(format!(
                    "epoch_checkpoints must ascend within 1..={}, got {c:?}",
                    preset.train.epochs
                )));
            }
        }
        Ok(preset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = ExperimentConfig::from_json(r#"{"pde": "burgers", "sample_sizes": [100], "noise_levels": [0.01]}"#).unwrap();
        assert_eq!(c.trials_per_cell, 12);
        assert_eq!(c.base_seed, 0);
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = ExperimentConfig::from_json(r#"{"pde": "heat", "sample_sizes": [1], "noise_levels": [0], "trials": 3}"#)
            .unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("trials")), "{e}");
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in [
            r#"{"pde": "heat", "sample_sizes": [0], "noise_levels": [0]}"#,
            r#"{"pde": "heat", "sample_sizes": [5], "noise_levels": [-0.1]}"#,
            r#"{"pde": "heat", "sample_sizes": [5], "noise_levels": [0], "trials_per_cell": 0}"#,
            r#"{"pde": "heat", "sample_sizes": [5], "noise_levels": [0], "epoch_checkpoints": [400]}"#,
            r#"{"pde": "wave", "sample_sizes": [5], "noise_levels": [0]}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }
}
