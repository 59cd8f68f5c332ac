//! Sparse models and solver configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Stlsq,
    BestSubset,
}

/// Coefficient vector over the full library plus its support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseModel<T> {
    pub coefficients: Vec<T>,
    pub support: Vec<bool>,
    pub solver: SolverKind,
    pub hyperparameters: BTreeMap<String, f64>,
}

impl<T: Scalar> SparseModel<T> {
    /// Builds a model whose support is the set of nonzero coefficients.
    pub fn from_coefficients(coefficients: Vec<T>, solver: SolverKind, hyperparameters: BTreeMap<String, f64>) -> Self {
        let support = coefficients.iter().map(|c| *c != T::zero()).collect();
        SparseModel { coefficients, support, solver, hyperparameters }
    }

    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.support.len()).filter(|&i| self.support[i]).collect()
    }

    pub fn support_size(&self) -> usize {
        self.support.iter().filter(|s| **s).count()
    }

    pub fn is_empty(&self) -> bool {
        self.support_size() == 0
    }

    /// `Theta xi`.
    pub fn predict(&self, theta: &Matrix<T>) -> Result<Vec<T>> {
        if theta.cols() != self.coefficients.len() {
            return Err(Error::ShapeMismatch(format!(
                "model has {} coefficients, library has {} columns",
                self.coefficients.len(),
                theta.cols()
            )));
        }
        Ok(theta.mul_vec(&self.coefficients))
    }
}

impl<T: Scalar + Serialize> SparseModel<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StlsqConfig {
    pub threshold: f64,
    pub alpha: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_true")]
    pub unbias: bool,
}

fn default_max_iter() -> usize {
    20
}

fn default_true() -> bool {
    true
}

impl StlsqConfig {
    pub fn new(threshold: f64, alpha: f64) -> Self {
        StlsqConfig { threshold, alpha, max_iter: default_max_iter(), unbias: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold >= 0.0) || !self.threshold.is_finite() {
            return Err(Error::InvalidParameter(format!("threshold must be >= 0, got {}", self.threshold)));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("ridge penalty must be >= 0, got {}", self.alpha)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Penalty per active term in the subset score `RSS/N + mu |S|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Complexity {
    /// `2 sigma^2 ln(N) / N` with `sigma^2` from the full least-squares fit.
    Auto,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestSubsetConfig {
    pub alpha: f64,
    #[serde(default)]
    pub max_support: Option<usize>,
    #[serde(default = "default_complexity")]
    pub complexity: Complexity,
    #[serde(default = "default_true")]
    pub unbias: bool,
}

fn default_complexity() -> Complexity {
    Complexity::Auto
}

impl BestSubsetConfig {
    pub fn new(alpha: f64) -> Self {
        BestSubsetConfig { alpha, max_support: None, complexity: Complexity::Auto, unbias: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("ridge penalty must be >= 0, got {}", self.alpha)));
        }
        if let Complexity::Fixed(mu) = self.complexity {
            if !(mu >= 0.0) || !mu.is_finite() {
                return Err(Error::InvalidParameter(format!("complexity penalty must be >= 0, got {mu}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverSpec {
    Stlsq(StlsqConfig),
    BestSubset(BestSubsetConfig),
}

impl SolverSpec {
    pub fn kind(&self) -> SolverKind {
        match self {
            SolverSpec::Stlsq(_) => SolverKind::Stlsq,
            SolverSpec::BestSubset(_) => SolverKind::BestSubset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SolverSpec::Stlsq(c) => c.validate(),
            SolverSpec::BestSubset(c) => c.validate(),
        }
    }

    pub fn solve<T: Scalar>(&self, theta: &Matrix<T>, y: &[T]) -> Result<SparseModel<T>> {
        match self {
            SolverSpec::Stlsq(c) => super::stlsq(theta, y, c).map(|r| r.model),
            SolverSpec::BestSubset(c) => super::best_subset(theta, y, c),
        }
    }
}
