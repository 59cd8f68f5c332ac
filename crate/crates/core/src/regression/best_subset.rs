//! Exhaustive subset search with a complexity-penalised score.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::regression::model::{BestSubsetConfig, Complexity, SolverKind, SparseModel};
use crate::regression::normal::{scatter, NormalEquations};
use crate::scalar::Scalar;

/// Largest library the enumeration accepts.
pub const MAX_ENUMERATED_COLUMNS: usize = 20;

/// Relative floor on the automatic penalty, in units of `mean(y^2)`.
pub const COMPLEXITY_FLOOR: f64 = 1e-10;

/// Calls `f` on every `size`-subset of `0..k` in lexicographic order.
pub(crate) fn for_each_combination(k: usize, size: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if size > k {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx)?;
        let mut i = size;
        while i > 0 && idx[i - 1] == k - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn auto_complexity<T: Scalar>(ne: &NormalEquations<T>, alpha: T) -> f64 {
    let n = ne.rows();
    let k = ne.columns();
    let mean_sq = ne.yty().as_f64() / n as f64;
    let sigma2 = if n > k {
        let all: Vec<usize> = (0..k).collect();
        match ne.solve(&all, alpha) {
            Ok(c) => ne.rss(&all, &c).as_f64() / (n - k) as f64,
            Err(_) => mean_sq,
        }
    } else {
        mean_sq
    };
    let mu = 2.0 * sigma2 * (n as f64).ln() / n as f64;
    mu.max(COMPLEXITY_FLOOR * mean_sq)
}

/// Minimises `RSS(S)/N + mu |S|` over all supports with `|S| <= max_support`;
/// ties keep the earlier support (smaller, then lexicographically first).
pub fn best_subset<T: Scalar>(theta: &Matrix<T>, y: &[T], cfg: &BestSubsetConfig) -> Result<SparseModel<T>> {
    cfg.validate()?;
    let k = theta.cols();
    if k > MAX_ENUMERATED_COLUMNS {
        return Err(Error::TooManyColumns { limit: MAX_ENUMERATED_COLUMNS, got: k });
    }
    let max_support = cfg.max_support.unwrap_or(k);
    if max_support > k {
        return Err(Error::InvalidParameter(format!("max_support {max_support} exceeds library size {k}")));
    }
    let ne = NormalEquations::new(theta, y)?;
    let n = T::lit(ne.rows() as f64);
    let alpha = T::lit(cfg.alpha);
    let mu_f = match cfg.complexity {
        Complexity::Fixed(m) => m,
        Complexity::Auto => auto_complexity(&ne, alpha),
    };
    let mu = T::lit(mu_f);

    let mut best_support: Vec<usize> = Vec::new();
    let mut best_coef: Vec<T> = Vec::new();
    let mut best_score = ne.yty() / n;
    for size in 1..=max_support {
        let penalty = mu * T::lit(size as f64);
        if penalty >= best_score {
            break;
        }
        for_each_combination(k, size, |s| {
            let coef = match ne.solve(s, alpha) {
                Ok(c) => c,
                Err(Error::RankDeficient) => return Ok(()),
                Err(e) => return Err(e),
            };
            let score = ne.rss(s, &coef) / n + penalty;
            if score < best_score {
                best_score = score;
                best_support = s.to_vec();
                best_coef = coef;
            }
            Ok(())
        })?;
    }
    if cfg.unbias && !best_support.is_empty() {
        if let Ok(ols) = ne.solve(&best_support, T::zero()) {
            best_coef = ols;
        }
    }
    let mut hyper = BTreeMap::new();
    hyper.insert("alpha".to_string(), cfg.alpha);
    hyper.insert("complexity".to_string(), mu_f);
    hyper.insert("max_support".to_string(), max_support as f64);
    hyper.insert("score".to_string(), best_score.as_f64());
    let mut model = SparseModel::from_coefficients(scatter(k, &best_support, &best_coef), SolverKind::BestSubset, hyper);
    for &i in &best_support {
        model.support[i] = true;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| {
            seen.push(s.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_combination(5, 0, |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
        for_each_combination(5, 5, |s| {
            assert_eq!(s, &[0, 1, 2, 3, 4]);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn combination_counts_match_binomials() {
        for k in 0..8 {
            for s in 0..=k {
                let mut c = 0u64;
                for_each_combination(k, s, |_| {
                    c += 1;
                    Ok(())
                })
                .unwrap();
                let binom = (0..s).fold(1u64, |acc, i| acc * (k - i) as u64 / (i + 1) as u64);
                assert_eq!(c, binom, "C({k},{s})");
            }
        }
    }

    fn problem() -> (Matrix<f64>, Vec<f64>) {
        let n = 50;
        let theta = Matrix::from_fn(n, 5, |r, c| {
            let x = r as f64 / n as f64 - 0.3;
            x.powi(c as i32) + 0.1 * ((c + 1) as f64 * 7.0 * x).cos()
        });
        let y = (0..n).map(|r| 1.5 * theta.get(r, 0) - 0.25 * theta.get(r, 3)).collect();
        (theta, y)
    }

    #[test]
    fn exact_data_recovers_truth() {
        let (theta, y) = problem();
        let m = best_subset(&theta, &y, &BestSubsetConfig::new(0.0)).unwrap();
        assert_eq!(m.support_indices(), vec![0, 3]);
        assert_relative_eq!(m.coefficients[0], 1.5, epsilon = 1e-9);
        assert_relative_eq!(m.coefficients[3], -0.25, epsilon = 1e-9);
    }

    #[test]
    fn huge_penalty_returns_empty_model() {
        let (theta, y) = problem();
        let mut cfg = BestSubsetConfig::new(0.0);
        cfg.complexity = Complexity::Fixed(1e9);
        assert!(best_subset(&theta, &y, &cfg).unwrap().is_empty());
    }

    #[test]
    fn max_support_limits_the_search() {
        let (theta, y) = problem();
        let mut cfg = BestSubsetConfig::new(0.0);
        cfg.max_support = Some(1);
        assert_eq!(best_subset(&theta, &y, &cfg).unwrap().support_size(), 1);
        cfg.max_support = Some(6);
        assert!(best_subset(&theta, &y, &cfg).is_err());
    }

    #[test]
    fn wide_library_is_refused() {
        let theta = Matrix::<f64>::zeros(30, 21);
        let y = vec![0.0; 30];
        assert!(matches!(
            best_subset(&theta, &y, &BestSubsetConfig::new(0.1)),
            Err(Error::TooManyColumns { limit: 20, got: 21 })
        ));
    }
}
