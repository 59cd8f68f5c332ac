//! Subsample ensembles and inclusion-probability aggregation.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::regression::model::{SolverSpec, SparseModel};
use crate::scalar::Scalar;
use crate::seed;

pub const DEFAULT_REPLICATES: usize = 100;
pub const DEFAULT_SUBSAMPLE_FRACTION: f64 = 0.8;
pub const DEFAULT_INCLUSION_CUTOFF: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult<T> {
    pub replicates: Vec<SparseModel<T>>,
    /// Fraction of replicates selecting each term.
    pub inclusion_probability: Vec<f64>,
    /// Per term, its coefficient in every replicate (zero where inactive).
    pub coefficient_samples: Vec<Vec<T>>,
    pub subsample_size: usize,
    pub seed: u64,
}

/// `ceil(fraction * n)`, clamped to `1..=n`.
pub fn subsample_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).clamp(1, n.max(1))
}

/// Sorted row indices of replicate `r`.
pub fn replicate_rows(n: usize, m: usize, seed: u64, r: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive_indexed(seed, "ensemble-replicate", r as u64));
    let mut rows = sample(&mut rng, n, m).into_vec();
    rows.sort_unstable();
    rows
}

/// Runs `solver` on `replicates` row subsamples of size `m` drawn without
/// replacement.
pub fn ensemble_discover<T: Scalar>(
    theta: &Matrix<T>,
    y: &[T],
    solver: &SolverSpec,
    replicates: usize,
    m: usize,
    seed: u64,
) -> Result<EnsembleResult<T>> {
    solver.validate()?;
    let n = theta.rows();
    if y.len() != n {
        return Err(Error::ShapeMismatch(format!("theta has {n} rows, target has {}", y.len())));
    }
    if m == 0 || m > n {
        return Err(Error::BadSubsample { m, n });
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("ensemble needs at least one replicate".into()));
    }
    let models = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let rows = replicate_rows(n, m, seed, r);
            let sub = theta.select_rows(&rows);
            let ys: Vec<T> = rows.iter().map(|&i| y[i]).collect();
            solver.solve(&sub, &ys)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = theta.cols();
    let inclusion_probability = (0..k)
        .map(|j| models.iter().filter(|mdl| mdl.support[j]).count() as f64 / replicates as f64)
        .collect();
    let coefficient_samples = (0..k).map(|j| models.iter().map(|mdl| mdl.coefficients[j]).collect()).collect();
    Ok(EnsembleResult { replicates: models, inclusion_probability, coefficient_samples, subsample_size: m, seed })
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

/// Keeps terms with inclusion probability `>= cutoff`; each kept coefficient
/// is the median over the replicates that selected it.
pub fn aggregate<T: Scalar>(ensemble: &EnsembleResult<T>, cutoff: f64) -> Result<SparseModel<T>> {
    if !(0.0..=1.0).contains(&cutoff) {
        return Err(Error::InvalidParameter(format!("inclusion cutoff must lie in [0, 1], got {cutoff}")));
    }
    let first = ensemble
        .replicates
        .first()
        .ok_or_else(|| Error::InvalidParameter("ensemble has no replicates".into()))?;
    let k = ensemble.inclusion_probability.len();
    let mut coefficients = vec![T::zero(); k];
    let mut support = vec![false; k];
    for j in 0..k {
        if ensemble.inclusion_probability[j] >= cutoff && ensemble.inclusion_probability[j] > 0.0 {
            let picked: Vec<f64> =
                ensemble.replicates.iter().filter(|m| m.support[j]).map(|m| m.coefficients[j].as_f64()).collect();
            support[j] = true;
            coefficients[j] = T::lit(median(picked));
        }
    }
    let mut hyper = first.hyperparameters.clone();
    hyper.retain(|k, _| k != "score" && k != "complexity");
    hyper.insert("inclusion_cutoff".to_string(), cutoff);
    hyper.insert("replicates".to_string(), ensemble.replicates.len() as f64);
    hyper.insert("subsample_size".to_string(), ensemble.subsample_size as f64);
    Ok(SparseModel { coefficients, support, solver: first.solver, hyperparameters: hyper })
}
