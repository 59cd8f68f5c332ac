//! Error metrics of a discovery run and the success judgment.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::{PdeTruth, ScatteredDataset};
use crate::dictionary::TermDescriptor;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::regression::SparseModel;
use crate::scalar::Scalar;
use crate::surrogate::{ForwardScratch, SurrogateParams};

pub const METRIC_NAMES: [&str; 5] = ["E_PDE", "E_NN", "E_dudt", "E_SINDy", "E_field"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub e_pde: f64,
    pub e_nn: f64,
    pub e_dudt: f64,
    pub e_sindy: f64,
    pub e_field: f64,
    pub n_points: usize,
}

impl MetricReport {
    pub fn rows(&self) -> [(&'static str, f64); 5] {
        let v = [self.e_pde, self.e_nn, self.e_dudt, self.e_sindy, self.e_field];
        std::array::from_fn(|i| (METRIC_NAMES[i], v[i]))
    }

    pub fn is_valid(&self) -> bool {
        self.rows().iter().all(|(_, v)| v.is_finite() && *v >= 0.0)
    }
}

fn mean_sq_diff<T: Scalar>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("{} values against {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::ShapeMismatch("metric over zero points".into()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x.as_f64() - y.as_f64()).powi(2)).sum::<f64>() / a.len() as f64)
}

fn prediction<T: Scalar>(model: &SparseModel<T>, theta: &Matrix<T>, n: usize) -> Result<Vec<T>> {
    if theta.rows() != n {
        return Err(Error::ShapeMismatch(format!("theta has {} rows for {n} targets", theta.rows())));
    }
    model.predict(theta)
}

/// `mean |u_t - Theta xi|^2` with the true time derivative.
pub fn e_pde<T: Scalar>(true_dudt: &[T], model: &SparseModel<T>, theta: &Matrix<T>) -> Result<f64> {
    let pred = prediction(model, theta, true_dudt.len())?;
    mean_sq_diff(true_dudt, &pred)
}

/// Mean squared misfit of the surrogate on the (noisy) training values.
pub fn e_nn<T: Scalar>(ds: &ScatteredDataset<T>, params: &SurrogateParams<T>) -> Result<f64> {
    field_error(ds, params)
}

pub fn e_dudt<T: Scalar>(true_dudt: &[T], surrogate_dudt: &[T]) -> Result<f64> {
    mean_sq_diff(true_dudt, surrogate_dudt)
}

/// `mean |u_t_hat - Theta xi|^2` with the surrogate's time derivative.
pub fn e_sindy<T: Scalar>(surrogate_dudt: &[T], model: &SparseModel<T>, theta: &Matrix<T>) -> Result<f64> {
    let pred = prediction(model, theta, surrogate_dudt.len())?;
    mean_sq_diff(surrogate_dudt, &pred)
}

/// Mean squared misfit of the surrogate on noise-free values.
pub fn e_field<T: Scalar>(clean: &ScatteredDataset<T>, params: &SurrogateParams<T>) -> Result<f64> {
    field_error(clean, params)
}

fn field_error<T: Scalar>(ds: &ScatteredDataset<T>, params: &SurrogateParams<T>) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::ShapeMismatch("metric over zero points".into()));
    }
    if ds.dim() != params.input_dim() {
        return Err(Error::ShapeMismatch(format!(
            "dataset has {} inputs, surrogate expects {}",
            ds.dim(),
            params.input_dim()
        )));
    }
    let mut scratch = ForwardScratch::new(params);
    let pred: Vec<T> = ds.points().map(|p| params.forward_with(p, &mut scratch)).collect();
    mean_sq_diff(&ds.values, &pred)
}

/// Exact support match with the truth and matching signs on every term.
pub fn judge_success<T: Scalar>(model: &SparseModel<T>, terms: &[TermDescriptor], truth: &PdeTruth) -> bool {
    if model.support.len() != terms.len() {
        return false;
    }
    let picked = model.support_indices();
    if picked.len() != truth.true_support.len() {
        return false;
    }
    picked.iter().all(|&k| {
        truth
            .true_support
            .iter()
            .position(|t| *t == terms[k])
            .is_some_and(|j| model.coefficients[k].as_f64().signum() == truth.true_coefficients[j].signum())
    })
}

/// Aligned text table: one row per metric, one column per labelled report.
pub fn metric_table(columns: &[(String, MetricReport)]) -> String {
    let mut out = String::new();
    let width = columns.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(10);
    let _ = write!(out, "{:<8}", "Metric");
    for (label, _) in columns {
        let _ = write!(out, "  {label:>width$}");
    }
    out.push('\n');
    for (i, name) in METRIC_NAMES.iter().enumerate() {
        let _ = write!(out, "{name:<8}");
        for (_, r) in columns {
            let _ = write!(out, "  {:>width$.4e}", r.rows()[i].1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{DomainSpec, ExactSolution, PdeKind};
    use crate::dictionary::preset_terms;
    use crate::regression::SolverKind;
    use crate::surrogate::InputScaling;
    use std::collections::BTreeMap;

    fn model(coefs: Vec<f64>) -> SparseModel<f64> {
        SparseModel::from_coefficients(coefs, SolverKind::Stlsq, BTreeMap::new())
    }

    fn zero_net() -> SurrogateParams<f64> {
        SurrogateParams::zeros(&[2, 3, 1], InputScaling::identity(2)).unwrap()
    }

    fn dataset(values: Vec<f64>) -> ScatteredDataset<f64> {
        let n = values.len();
        let coords = (0..2 * n).map(|i| i as f64 * 0.1).collect();
        ScatteredDataset::new(coords, values, DomainSpec::new(vec![[0.0, 10.0]], [0.0, 10.0]).unwrap()).unwrap()
    }

    #[test]
    fn e_pde_hand_computed() {
        let theta = Matrix::from_rows(2, 1, vec![1.0, 1.0]).unwrap();
        let m = model(vec![2.0]);
        assert_eq!(e_pde(&[3.0, 5.0], &m, &theta).unwrap(), 5.0);
        assert_eq!(e_pde(&[2.0, 2.0], &m, &theta).unwrap(), 0.0);
        assert!(e_pde(&[2.0], &m, &theta).is_err());
    }

    #[test]
    fn zero_surrogate_errors() {
        assert_eq!(e_nn(&dataset(vec![1.0, -1.0]), &zero_net()).unwrap(), 1.0);
        assert_eq!(e_field(&dataset(vec![2.0, 4.0]), &zero_net()).unwrap(), 10.0);
    }

    #[test]
    fn derivative_errors() {
        assert_eq!(e_dudt(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(e_dudt(&[0.5, 0.25], &[0.5, 0.25]).unwrap(), 0.0);
        let theta = Matrix::from_rows(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(e_sindy(&[3.0, 4.0], &model(vec![0.0, 0.0]), &theta).unwrap(), 12.5);
    }

    #[test]
    fn success_requires_support_and_signs() {
        let terms = preset_terms(PdeKind::Burgers);
        let truth = PdeTruth::for_solution(&ExactSolution::default_for(PdeKind::Burgers));
        let xi = truth.coefficient_vector(&terms).unwrap();
        assert!(judge_success(&model(xi.clone()), &terms, &truth));
        let mut extra = xi.clone();
        extra[0] = 1e-3;
        assert!(!judge_success(&model(extra), &terms, &truth));
        let flipped: Vec<f64> = xi.iter().map(|c| if *c < 0.0 { -c } else { *c }).collect();
        assert!(!judge_success(&model(flipped), &terms, &truth));
        let scaled: Vec<f64> = xi.iter().map(|c| c * 0.3).collect();
        assert!(judge_success(&model(scaled), &terms, &truth));
        assert!(!judge_success(&model(vec![0.0; terms.len()]), &terms, &truth));
    }

    #[test]
    fn table_has_a_row_per_metric() {
        let r = MetricReport { e_pde: 1.0, e_nn: 2.0, e_dudt: 3.0, e_sindy: 4.0, e_field: 5.0, n_points: 3 };
        let t = metric_table(&[("1%".into(), r.clone()), ("10%".into(), r)]);
        assert_eq!(t.lines().count(), 6);
        assert!(t.lines().nth(5).unwrap().starts_with("E_field"));
    }
}
