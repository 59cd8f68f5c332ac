//! Gram-form least squares shared by the sparse solvers.

use crate::error::{Error, Result};
use crate::linalg::{cholesky_in_place, cholesky_solve, Matrix};
use crate::scalar::Scalar;

/// `Theta^T Theta`, `Theta^T y` and `y^T y` for one design.
#[derive(Clone, Debug)]
pub struct NormalEquations<T> {
    gram: Vec<T>,
    rhs: Vec<T>,
    yty: T,
    k: usize,
    n: usize,
}

impl<T: Scalar> NormalEquations<T> {
    pub fn new(theta: &Matrix<T>, y: &[T]) -> Result<Self> {
        let (n, k) = (theta.rows(), theta.cols());
        if y.len() != n {
            return Err(Error::ShapeMismatch(format!("theta has {n} rows, target has {}", y.len())));
        }
        if n == 0 || k == 0 {
            return Err(Error::ShapeMismatch("empty regression problem".into()));
        }
        let mut gram = vec![T::zero(); k * k];
        let mut rhs = vec![T::zero(); k];
        let mut yty = T::zero();
        for r in 0..n {
            let row = theta.row(r);
            let yr = y[r];
            yty += yr * yr;
            for i in 0..k {
                let ri = row[i];
                rhs[i] += ri * yr;
                for j in i..k {
                    gram[i * k + j] += ri * row[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                gram[i * k + j] = gram[j * k + i];
            }
        }
        Ok(NormalEquations { gram, rhs, yty, k, n })
    }

    pub fn columns(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn yty(&self) -> T {
        self.yty
    }

    /// Ridge coefficients restricted to `active` (column indices).
    pub fn solve(&self, active: &[usize], alpha: T) -> Result<Vec<T>> {
        let s = active.len();
        if s == 0 {
            return Ok(Vec::new());
        }
        let mut a = vec![T::zero(); s * s];
        let mut b = vec![T::zero(); s];
        for (p, &i) in active.iter().enumerate() {
            b[p] = self.rhs[i];
            for (q, &j) in active.iter().enumerate() {
                a[p * s + q] = self.gram[i * self.k + j];
            }
            a[p * s + p] += alpha;
        }
        cholesky_in_place(&mut a, s)?;
        cholesky_solve(&a, s, &mut b);
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::RankDeficient);
        }
        Ok(b)
    }

    /// Residual sum of squares of `coef` on `active`, clamped at zero.
    pub fn rss(&self, active: &[usize], coef: &[T]) -> T {
        let mut rss = self.yty;
        for (p, &i) in active.iter().enumerate() {
            rss -= T::lit(2.0) * coef[p] * self.rhs[i];
            for (q, &j) in active.iter().enumerate() {
                rss += coef[p] * coef[q] * self.gram[i * self.k + j];
            }
        }
        rss.max(T::zero())
    }
}

/// Scatter coefficients on `active` into a dense vector of length `k`.
pub(crate) fn scatter<T: Scalar>(k: usize, active: &[usize], coef: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); k];
    for (&i, &c) in active.iter().zip(coef) {
        out[i] = c;
    }
    out
}

/// Ridge regression on the columns flagged in `active`; inactive
/// coefficients are zero.
pub fn ridge_solve<T: Scalar>(theta: &Matrix<T>, y: &[T], alpha: T, active: &[bool]) -> Result<Vec<T>> {
    if !(alpha >= T::zero()) {
        return Err(Error::InvalidParameter(format!("ridge penalty must be >= 0, got {alpha:?}")));
    }
    if active.len() != theta.cols() {
        return Err(Error::ShapeMismatch(format!(
            "active mask has {} entries for {} columns",
            active.len(),
            theta.cols()
        )));
    }
    let ne = NormalEquations::new(theta, y)?;
    let idx: Vec<usize> = (0..active.len()).filter(|&i| active[i]).collect();
    let coef = ne.solve(&idx, alpha)?;
    Ok(scatter(theta.cols(), &idx, &coef))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn design() -> (Matrix<f64>, Vec<f64>) {
        let theta = Matrix::from_rows(4, 2, vec![1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]).unwrap();
        (theta, vec![1.0, 3.0, 5.0, 7.0])
    }

    #[test]
    fn ols_recovers_exact_line() {
        let (theta, y) = design();
        let c = ridge_solve(&theta, &y, 0.0, &[true, true]).unwrap();
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(c[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ridge_matches_closed_form() {
        // (G + a I)^-1 b with G = [[4,6],[6,14]], b = [16,34], a = 1
        let (theta, y) = design();
        let c = ridge_solve(&theta, &y, 1.0, &[true, true]).unwrap();
        let det = 5.0 * 15.0 - 36.0;
        assert_relative_eq!(c[0], (15.0 * 16.0 - 6.0 * 34.0) / det, epsilon = 1e-12);
        assert_relative_eq!(c[1], (5.0 * 34.0 - 6.0 * 16.0) / det, epsilon = 1e-12);
    }

    #[test]
    fn masked_columns_stay_zero() {
        let (theta, y) = design();
        let c = ridge_solve(&theta, &y, 0.0, &[false, true]).unwrap();
        assert_eq!(c[0], 0.0);
        assert_relative_eq!(c[1], 34.0 / 14.0, epsilon = 1e-12);
    }

    #[test]
    fn duplicate_columns_are_rank_deficient_without_ridge() {
        let theta = Matrix::from_rows(3, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        let y = [1.0, 2.0, 3.0];
        assert!(matches!(ridge_solve(&theta, &y, 0.0, &[true, true]), Err(Error::RankDeficient)));
        let c = ridge_solve(&theta, &y, 1e-3, &[true, true]).unwrap();
        assert_relative_eq!(c[0], c[1], epsilon = 1e-12);
    }

    #[test]
    fn rss_agrees_with_explicit_residuals() {
        let (theta, y) = design();
        let ne = NormalEquations::new(&theta, &y).unwrap();
        let coef = [0.5, 1.5];
        let explicit: f64 = (0..4).map(|r| (y[r] - theta.row(r)[0] * 0.5 - theta.row(r)[1] * 1.5).powi(2)).sum();
        assert_relative_eq!(ne.rss(&[0, 1], &coef), explicit, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (theta, y) = design();
        assert!(ridge_solve(&theta, &y, -1.0, &[true, true]).is_err());
        assert!(ridge_solve(&theta, &y[..3], 0.0, &[true, true]).is_err());
        assert!(ridge_solve(&theta, &y, 0.0, &[true]).is_err());
    }
}
