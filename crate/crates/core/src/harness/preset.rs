//! Per-equation pipeline settings and their overrides.

use serde::{Deserialize, Serialize};

use crate::data::{DomainSpec, ExactSolution, PdeKind};
use crate::dictionary::{preset_terms, request_for, TermDescriptor};
use crate::error::{Error, Result};
use crate::regression::{
    BestSubsetConfig, SolverSpec, StlsqConfig, DEFAULT_INCLUSION_CUTOFF, DEFAULT_REPLICATES,
    DEFAULT_SUBSAMPLE_FRACTION,
};
use crate::surrogate::{BatchSize, OptimizerKind, TrainConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSettings {
    pub replicates: usize,
    pub subsample_fraction: f64,
    pub inclusion_cutoff: f64,
}

impl Default for EnsembleSettings {
    fn default() -> Self {
        EnsembleSettings {
            replicates: DEFAULT_REPLICATES,
            subsample_fraction: DEFAULT_SUBSAMPLE_FRACTION,
            inclusion_cutoff: DEFAULT_INCLUSION_CUTOFF,
        }
    }
}

impl EnsembleSettings {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("ensemble replicates must be >= 1".into()));
        }
        if !(self.subsample_fraction > 0.0 && self.subsample_fraction <= 1.0) {
            return Err(Error::Config(format!("subsample_fraction must lie in (0, 1], got {}", self.subsample_fraction)));
        }
        if !(self.inclusion_cutoff > 0.0 && self.inclusion_cutoff <= 1.0) {
            return Err(Error::Config(format!("inclusion_cutoff must lie in (0, 1], got {}", self.inclusion_cutoff)));
        }
        Ok(())
    }
}

/// Everything one trial needs besides `(N, noise, seed)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub pde: PdeKind,
    pub solution: ExactSolution,
    pub domain: DomainSpec,
    pub hidden: Vec<usize>,
    pub train: TrainConfig,
    pub solver: SolverSpec,
    pub ensemble: EnsembleSettings,
    /// Epoch spacing of ensemble snapshots in evolution runs.
    pub checkpoint_every: usize,
}

impl Preset {
    pub fn for_pde(pde: PdeKind) -> Self {
        let base = TrainConfig::default();
        let (hidden, train, solver, checkpoint_every) = match pde {
            PdeKind::Burgers => (
                vec![32, 32],
                TrainConfig {
                    optimizer: OptimizerKind::AdamW,
                    learning_rate: 5e-4,
                    weight_decay: 0.01,
                    batch_size: BatchSize::Mini(20),
                    epochs: 200,
                    ..base
                },
                SolverSpec::Stlsq(StlsqConfig::new(0.14, 0.05)),
                25,
            ),
            PdeKind::Heat => (
                vec![128; 4],
                TrainConfig {
                    optimizer: OptimizerKind::Adam,
                    learning_rate: 2e-4,
                    weight_decay: 0.0,
                    batch_size: BatchSize::Mini(20),
                    epochs: 300,
                    ..base
                },
                SolverSpec::BestSubset(BestSubsetConfig::new(0.05)),
                25,
            ),
            PdeKind::Kdv => (
                vec![30; 4],
                TrainConfig {
                    optimizer: OptimizerKind::Adam,
                    learning_rate: 1e-3,
                    weight_decay: 0.0,
                    batch_size: BatchSize::Full,
                    epochs: 10_000,
                    ..base
                },
                SolverSpec::BestSubset(BestSubsetConfig::new(0.05)),
                2500,
            ),
            PdeKind::AdvDiff => (
                vec![60; 8],
                TrainConfig {
                    optimizer: OptimizerKind::Adam,
                    learning_rate: 1e-3,
                    weight_decay: 0.0,
                    batch_size: BatchSize::Full,
                    epochs: 10_000,
                    ..base
                },
                SolverSpec::BestSubset(BestSubsetConfig::new(0.0005)),
                2500,
            ),
        };
        Preset {
            pde,
            solution: ExactSolution::default_for(pde),
            domain: DomainSpec::default_for(pde),
            hidden,
            train,
            solver,
            ensemble: EnsembleSettings::default(),
            checkpoint_every,
        }
    }

    pub fn terms(&self) -> Vec<TermDescriptor> {
        preset_terms(self.pde)
    }

    /// Checkpoints every `checkpoint_every` epochs up to the final epoch.
    pub fn default_checkpoints(&self) -> Vec<usize> {
        let step = self.checkpoint_every.max(1);
        (1..=self.train.epochs / step).map(|i| i * step).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.solution.kind() != self.pde || self.domain.spatial_dim() != self.pde.spatial_dim() {
            return Err(Error::Config(format!("preset parts disagree on the equation `{}`", self.pde)));
        }
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return Err(Error::Config(format!("hidden layer sizes must be positive, got {:?}", self.hidden)));
        }
        self.train.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.solver.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.ensemble.validate()?;
        request_for(&self.terms()).check_supported(self.pde.spatial_dim())
    }

    pub fn with_overrides(mut self, o: &PresetOverrides) -> Result<Self> {
        if let Some(h) = &o.hidden {
            self.hidden = h.clone();
        }
        if let Some(v) = o.epochs {
            self.train.epochs = v;
        }
        if let Some(v) = o.learning_rate {
            self.train.learning_rate = v;
        }
        if let Some(v) = o.weight_decay {
            self.train.weight_decay = v;
        }
        if let Some(v) = o.optimizer {
            self.train.optimizer = v;
        }
        if let Some(v) = o.batch_size {
            self.train.batch_size = v;
        }
        if let Some(v) = o.standardize_output {
            self.train.standardize_output = v;
        }
        if let Some(v) = o.holdout_fraction {
            self.train.holdout_fraction = v;
        }
        if let Some(v) = &o.solver {
            self.solver = v.clone();
        }
        if let Some(v) = o.replicates {
            self.ensemble.replicates = v;
        }
        if let Some(v) = o.subsample_fraction {
            self.ensemble.subsample_fraction = v;
        }
        if let Some(v) = o.inclusion_cutoff {
            self.ensemble.inclusion_cutoff = v;
        }
        if let Some(v) = o.checkpoint_every {
            self.checkpoint_every = v;
        }
        self.validate()?;
        Ok(self)
    }
}

/// Optional replacements for preset fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_decay: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<BatchSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardize_output: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsample_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_every: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for pde in PdeKind::ALL {
            Preset::for_pde(pde).validate().unwrap();
        }
    }

    #[test]
    fn burgers_checkpoints_every_25_epochs() {
        let p = Preset::for_pde(PdeKind::Burgers);
        let c = p.default_checkpoints();
        assert_eq!(c.len(), 8);
        assert_eq!(c.last(), Some(&200));
        assert_eq!(p.solver, SolverSpec::Stlsq(StlsqConfig::new(0.14, 0.05)));
    }

    #[test]
    fn overrides_apply_and_validate() {
        let o = PresetOverrides { hidden: Some(vec![8]), epochs: Some(3), ..Default::default() };
        let p = Preset::for_pde(PdeKind::Kdv).with_overrides(&o).unwrap();
        assert_eq!((p.hidden.clone(), p.train.epochs), (vec![8], 3));
        let bad = PresetOverrides { inclusion_cutoff: Some(0.0), ..Default::default() };
        assert!(matches!(Preset::for_pde(PdeKind::Kdv).with_overrides(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_override_keys_are_rejected() {
        let err = serde_json::from_str::<PresetOverrides>(r#"{"epoch": 3}"#).unwrap_err();
        assert!(err.to_string().contains("epoch"));
    }
}
