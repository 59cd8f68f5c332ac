//! Sequentially thresholded ridge regression.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::regression::model::{SolverKind, SparseModel, StlsqConfig};
use crate::regression::normal::{scatter, NormalEquations};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct StlsqRun<T> {
    pub model: SparseModel<T>,
    /// Active-set size before the first solve and after each threshold pass.
    pub support_sizes: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn stlsq<T: Scalar>(theta: &Matrix<T>, y: &[T], cfg: &StlsqConfig) -> Result<StlsqRun<T>> {
    stlsq_from(theta, y, cfg, &vec![true; theta.cols()])
}

/// STLSQ started from `initial` instead of the full library.
pub fn stlsq_from<T: Scalar>(theta: &Matrix<T>, y: &[T], cfg: &StlsqConfig, initial: &[bool]) -> Result<StlsqRun<T>> {
    cfg.validate()?;
    let k = theta.cols();
    if initial.len() != k {
        return Err(Error::ShapeMismatch(format!("initial mask has {} entries for {k} columns", initial.len())));
    }
    let ne = NormalEquations::new(theta, y)?;
    let alpha = T::lit(cfg.alpha);
    let lambda = T::lit(cfg.threshold);

    let mut active: Vec<usize> = (0..k).filter(|&i| initial[i]).collect();
    let mut sizes = vec![active.len()];
    let mut coef = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        if active.is_empty() {
            converged = true;
            break;
        }
        iterations += 1;
        coef = ne.solve(&active, alpha)?;
        let kept: Vec<usize> = active.iter().zip(&coef).filter(|(_, c)| c.abs() >= lambda).map(|(i, _)| *i).collect();
        if kept.len() == active.len() {
            converged = true;
            break;
        }
        active = kept;
        sizes.push(active.len());
        coef.clear();
    }
    if !active.is_empty() && coef.len() != active.len() {
        coef = ne.solve(&active, alpha)?;
    }
    if cfg.unbias && !active.is_empty() {
        if let Ok(ols) = ne.solve(&active, T::zero()) {
            coef = ols;
        }
    }
    let mut hyper = BTreeMap::new();
    hyper.insert("threshold".to_string(), cfg.threshold);
    hyper.insert("alpha".to_string(), cfg.alpha);
    let mut model = SparseModel::from_coefficients(scatter(k, &active, &coef), SolverKind::Stlsq, hyper);
    // An unbiased refit can land exactly on zero; the support is the active set.
    for &i in &active {
        model.support[i] = true;
    }
    Ok(StlsqRun { model, support_sizes: sizes, iterations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn problem() -> (Matrix<f64>, Vec<f64>) {
        let n = 40;
        let theta = Matrix::from_fn(n, 4, |r, c| {
            let x = r as f64 / n as f64;
            match c {
                0 => 1.0,
                1 => x,
                2 => x * x,
                _ => (3.0 * x).sin(),
            }
        });
        let y = (0..n).map(|r| 2.0 * theta.get(r, 1) - 0.7 * theta.get(r, 3)).collect();
        (theta, y)
    }

    #[test]
    fn recovers_sparse_truth() {
        let (theta, y) = problem();
        let run = stlsq(&theta, &y, &StlsqConfig::new(0.1, 0.0)).unwrap();
        assert!(run.converged);
        assert_eq!(run.model.support, vec![false, true, false, true]);
        assert_relative_eq!(run.model.coefficients[1], 2.0, epsilon = 1e-9);
        assert_relative_eq!(run.model.coefficients[3], -0.7, epsilon = 1e-9);
    }

    #[test]
    fn huge_threshold_empties_the_model() {
        let (theta, y) = problem();
        let run = stlsq(&theta, &y, &StlsqConfig::new(1e6, 0.0)).unwrap();
        assert!(run.model.is_empty());
        assert!(run.model.coefficients.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn zero_threshold_keeps_everything() {
        let (theta, y) = problem();
        let run = stlsq(&theta, &y, &StlsqConfig::new(0.0, 1e-3)).unwrap();
        assert_eq!(run.model.support_size(), 4);
        assert_eq!(run.support_sizes, vec![4]);
    }

    #[test]
    fn empty_initial_support_is_a_fixed_point() {
        let (theta, y) = problem();
        let run = stlsq_from(&theta, &y, &StlsqConfig::new(0.1, 0.0), &[false; 4]).unwrap();
        assert!(run.model.is_empty());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let (theta, y) = problem();
        assert!(stlsq(&theta, &y, &StlsqConfig::new(-1.0, 0.0)).is_err());
        assert!(stlsq(&theta, &y, &StlsqConfig::new(0.1, f64::NAN)).is_err());
    }
}
