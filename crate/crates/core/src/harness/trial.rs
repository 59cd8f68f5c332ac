//! One end-to-end discovery run: sample, corrupt, fit, differentiate, regress.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{exact_bundles, inject_noise, sample_scattered, PdeTruth, ScatteredDataset};
use crate::derivative::{DerivativeRequest, Partial};
use crate::dictionary::{assemble, request_for, Dictionary};
use crate::error::{Error, Result};
use crate::harness::preset::Preset;
use crate::metrics::{e_dudt, e_field, e_nn, e_pde, e_sindy, judge_success, MetricReport};
use crate::regression::{aggregate, ensemble_discover, subsample_size, EnsembleResult, SparseModel};
use crate::seed;
use crate::surrogate::{batch_bundles, LossTrace, SurrogateParams, Trainer};

/// Ensemble taken while training was paused at `epoch`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSnapshot {
    pub epoch: usize,
    pub ensemble: EnsembleResult<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub model: Option<SparseModel<f64>>,
    pub metrics: Option<MetricReport>,
    pub inclusion_probability: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkpoints: Vec<CheckpointSnapshot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub wall_seconds: f64,
}

/// Everything a completed pipeline produced.
#[derive(Clone, Debug)]
pub struct TrialRun {
    pub clean: ScatteredDataset<f64>,
    pub noisy: ScatteredDataset<f64>,
    pub params: SurrogateParams<f64>,
    pub trace: LossTrace,
    pub dictionary: Dictionary<f64>,
    pub ensemble: EnsembleResult<f64>,
    pub model: SparseModel<f64>,
    pub metrics: MetricReport,
    pub success: bool,
    pub checkpoints: Vec<CheckpointSnapshot>,
}

/// Independent seeds for each random stage of a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StageSeeds {
    pub sample: u64,
    pub noise: u64,
    pub train: u64,
    pub ensemble: u64,
}

impl StageSeeds {
    pub fn new(trial_seed: u64) -> Self {
        StageSeeds {
            sample: seed::derive(trial_seed, "sample"),
            noise: seed::derive(trial_seed, "noise"),
            train: seed::derive(trial_seed, "train"),
            ensemble: seed::derive(trial_seed, "ensemble"),
        }
    }
}

fn check_checkpoints(checkpoints: &[usize], epochs: usize) -> Result<()> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("checkpoints must be strictly ascending, got {checkpoints:?}")));
    }
    if let Some(&last) = checkpoints.last() {
        if last > epochs {
            return Err(Error::Config(format!("checkpoint {last} lies beyond the {epochs} training epochs")));
        }
    }
    Ok(())
}

/// Dictionary from the surrogate's derivatives at `coords` and the preset's
/// ensemble over it.
pub fn discover(
    preset: &Preset,
    params: &SurrogateParams<f64>,
    coords: &[f64],
    ensemble_seed: u64,
) -> Result<(Dictionary<f64>, EnsembleResult<f64>)> {
    let terms = preset.terms();
    let bundles = batch_bundles(params, coords, &request_for(&terms))?;
    let dict = assemble(&bundles, &terms)?;
    let m = subsample_size(dict.point_count(), preset.ensemble.subsample_fraction);
    let ens = ensemble_discover(&dict.theta, &dict.target, &preset.solver, preset.ensemble.replicates, m, ensemble_seed)?;
    Ok((dict, ens))
}

/// Runs the pipeline, taking ensemble snapshots at `checkpoints`.
pub fn execute(preset: &Preset, n: usize, noise: f64, trial_seed: u64, checkpoints: &[usize]) -> Result<TrialRun> {
    preset.validate()?;
    check_checkpoints(checkpoints, preset.train.epochs)?;
    let seeds = StageSeeds::new(trial_seed);
    let sol = &preset.solution;
    let mut clean = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &preset.domain, n, seeds.sample)?;
    clean.pde = Some(preset.pde);
    clean.parameters = sol.parameters();
    let noisy = inject_noise(&clean, noise, seeds.noise)?;

    let mut cfg = preset.train.clone();
    cfg.seed = seeds.train;
    let mut trainer = Trainer::new(&noisy, &preset.hidden, cfg)?;
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    for &c in checkpoints {
        trainer.run_epochs(c - trainer.epoch())?;
        let (_, ens) = discover(preset, trainer.params(), &noisy.coords, seeds.ensemble)?;
        snapshots.push(CheckpointSnapshot { epoch: c, ensemble: ens });
    }
    trainer.run_to_end()?;
    let (params, trace) = trainer.finish();
    if let Some(w) = &trace.warning {
        log::warn!("{}: {w}", preset.pde);
    }

    let (dictionary, ensemble) = discover(preset, &params, &noisy.coords, seeds.ensemble)?;
    let model = aggregate(&ensemble, preset.ensemble.inclusion_cutoff)?;

    let terms = preset.terms();
    let mut exact_request = request_for(&terms);
    exact_request = DerivativeRequest::new(exact_request.partials().chain([Partial::UT]));
    let exact = assemble(&exact_bundles(sol, &noisy.coords, &exact_request)?, &terms)?;
    let metrics = MetricReport {
        e_pde: e_pde(&exact.target, &model, &exact.theta)?,
        e_nn: e_nn(&noisy, &params)?,
        e_dudt: e_dudt(&exact.target, &dictionary.target)?,
        e_sindy: e_sindy(&dictionary.target, &model, &dictionary.theta)?,
        e_field: e_field(&clean, &params)?,
        n_points: n,
    };
    let truth = PdeTruth::for_solution(sol);
    let success = judge_success(&model, &terms, &truth);
    Ok(TrialRun {
        clean,
        noisy,
        params,
        trace,
        dictionary,
        ensemble,
        model,
        metrics,
        success,
        checkpoints: snapshots,
    })
}

/// One grid trial. Failures are recorded in the outcome, never returned.
pub fn run_trial(preset: &Preset, n: usize, noise: f64, trial: usize, trial_seed: u64, checkpoints: &[usize]) -> TrialOutcome {
    let start = Instant::now();
    let result = execute(preset, n, noise, trial_seed, checkpoints);
    let wall_seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(run) => TrialOutcome {
            trial,
            seed: trial_seed,
            success: run.success,
            inclusion_probability: Some(run.ensemble.inclusion_probability.clone()),
            model: Some(run.model),
            metrics: Some(run.metrics),
            checkpoints: run.checkpoints,
            diagnostic: None,
            wall_seconds,
        },
        Err(e) => {
            log::warn!("{} N={n} noise={noise} trial {trial} failed: {e}", preset.pde);
            TrialOutcome {
                trial,
                seed: trial_seed,
                success: false,
                model: None,
                metrics: None,
                inclusion_probability: None,
                checkpoints: Vec::new(),
                diagnostic: Some(e.to_string()),
                wall_seconds,
            }
        }
    }
}

/// Ensemble snapshots at each checkpoint of a single run.
pub fn epoch_evolution(
    preset: &Preset,
    n: usize,
    noise: f64,
    trial_seed: u64,
    checkpoints: &[usize],
) -> Result<Vec<CheckpointSnapshot>> {
    Ok(execute(preset, n, noise, trial_seed, checkpoints)?.checkpoints)
}
