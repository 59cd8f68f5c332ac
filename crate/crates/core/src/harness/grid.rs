//! Grid execution over sample sizes, noise levels and trials.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::PdeKind;
use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, WORKERS_ENV};
use crate::harness::trial::{run_trial, TrialOutcome};
use crate::regression::SparseModel;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub pde: PdeKind,
    pub n: usize,
    pub noise: f64,
    pub successes: usize,
    pub trials: usize,
    pub mean_wall_seconds: f64,
    /// Median coefficients over trials of the terms chosen in at least half
    /// of them.
    pub consensus: Option<SparseModel<f64>>,
    pub trial_results: Vec<TrialOutcome>,
}

impl CellResult {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub config: ExperimentConfig,
    pub terms: Vec<String>,
    pub cells: Vec<CellResult>,
}

/// `base ^ hash(pde, N, noise, trial)`; a cell's seeds depend only on its
/// own coordinates.
pub fn trial_seed(base: u64, pde: PdeKind, n: usize, noise: f64, trial: usize) -> u64 {
    let key = format!("{pde}/{n}/{:016x}/{trial}", noise.to_bits());
    base ^ seed::splitmix64(seed::fnv1a(key.as_bytes()))
}

/// Worker count from the environment, else the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn consensus(trials: &[TrialOutcome]) -> Option<SparseModel<f64>> {
    let models: Vec<&SparseModel<f64>> = trials.iter().filter_map(|t| t.model.as_ref()).collect();
    let first = models.first()?;
    let k = first.coefficients.len();
    let mut coefficients = vec![0.0; k];
    let mut support = vec![false; k];
    for j in 0..k {
        let picked: Vec<f64> = models.iter().filter(|m| m.support[j]).map(|m| m.coefficients[j]).collect();
        if 2 * picked.len() >= trials.len() && !picked.is_empty() {
            support[j] = true;
            coefficients[j] = median(picked);
        }
    }
    let mut hyperparameters = BTreeMap::new();
    hyperparameters.insert("trials".to_string(), trials.len() as f64);
    Some(SparseModel { coefficients, support, solver: first.solver, hyperparameters })
}

/// Runs every `(N, noise, trial)` of the grid; per-trial failures are
/// recorded, not propagated.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<GridResult> {
    cfg.validate()?;
    let preset = cfg.preset()?;
    let checkpoints = cfg.epoch_checkpoints.clone().unwrap_or_default();
    let cells: Vec<(usize, f64)> =
        cfg.sample_sizes.iter().flat_map(|&n| cfg.noise_levels.iter().map(move |&s| (n, s))).collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..cfg.trials_per_cell).map(move |t| (c, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, t)| {
                let (n, noise) = cells[c];
                let s = trial_seed(cfg.base_seed, cfg.pde, n, noise, t);
                run_trial(&preset, n, noise, t, s, &checkpoints)
            })
            .collect()
    });
    let mut outcomes = outcomes.into_iter();
    let results = cells
        .iter()
        .map(|&(n, noise)| {
            let trial_results: Vec<TrialOutcome> = outcomes.by_ref().take(cfg.trials_per_cell).collect();
            let successes = trial_results.iter().filter(|t| t.success).count();
            let mean_wall_seconds =
                trial_results.iter().map(|t| t.wall_seconds).sum::<f64>() / trial_results.len() as f64;
            CellResult {
                pde: cfg.pde,
                n,
                noise,
                successes,
                trials: trial_results.len(),
                mean_wall_seconds,
                consensus: consensus(&trial_results),
                trial_results,
            }
        })
        .collect();
    let terms = preset.terms().iter().map(|t| t.label()).collect();
    Ok(GridResult { config: cfg.clone(), terms, cells: results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_depend_on_every_coordinate() {
        let s = trial_seed(7, PdeKind::Burgers, 100, 0.01, 0);
        assert_ne!(s, trial_seed(8, PdeKind::Burgers, 100, 0.01, 0));
        assert_ne!(s, trial_seed(7, PdeKind::Heat, 100, 0.01, 0));
        assert_ne!(s, trial_seed(7, PdeKind::Burgers, 101, 0.01, 0));
        assert_ne!(s, trial_seed(7, PdeKind::Burgers, 100, 0.1, 0));
        assert_ne!(s, trial_seed(7, PdeKind::Burgers, 100, 0.01, 1));
    }

    #[test]
    fn consensus_keeps_majority_terms() {
        let mk = |c: Vec<f64>| TrialOutcome {
            trial: 0,
            seed: 0,
            success: true,
            model: Some(SparseModel::from_coefficients(c, crate::regression::SolverKind::Stlsq, BTreeMap::new())),
            metrics: None,
            inclusion_probability: None,
            checkpoints: Vec::new(),
            diagnostic: None,
            wall_seconds: 0.0,
        };
        let trials = vec![mk(vec![1.0, 0.0, 2.0]), mk(vec![3.0, 0.0, 0.0]), mk(vec![2.0, 5.0, 0.0])];
        let c = consensus(&trials).unwrap();
        assert_eq!(c.support, vec![true, false, false]);
        assert_eq!(c.coefficients, vec![2.0, 0.0, 0.0]);
    }
}
