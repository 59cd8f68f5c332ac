//! Ground-truth equations and exact derivative bundles of the closed forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::exact::{ExactSolution, PdeKind};
use crate::derivative::{DerivativeBundle, DerivativeRequest, Partial};
use crate::dictionary::TermDescriptor;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Scalar;
use crate::surrogate::input_axes;

/// True right-hand side `u_t = sum_k xi_k theta_k` of a benchmark.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeTruth {
    pub name: PdeKind,
    pub true_support: Vec<TermDescriptor>,
    pub true_coefficients: Vec<f64>,
    pub parameters: BTreeMap<String, f64>,
}

impl PdeTruth {
    pub fn for_solution(sol: &ExactSolution) -> Self {
        let term = |p: Partial| TermDescriptor::single(p);
        let u_ux = TermDescriptor::new([(Partial::U, 1), (Partial::UX, 1)]);
        let (support, coefficients) = match sol {
            ExactSolution::Burgers { nu } => (vec![u_ux, term(Partial::UXX)], vec![-1.0, *nu]),
            ExactSolution::Heat { nu, .. } => (vec![term(Partial::UXX)], vec![*nu]),
            ExactSolution::Kdv(p) => (vec![u_ux, term(Partial::UXXX)], vec![-p.beta, -1.0]),
            ExactSolution::AdvDiff(p) => (
                vec![term(Partial::UX), term(Partial::UY), term(Partial::UXX), term(Partial::UYY)],
                vec![-p.velocity[0], -p.velocity[1], p.diffusivity, p.diffusivity],
            ),
        };
        PdeTruth {
            name: sol.kind(),
            true_support: support,
            true_coefficients: coefficients,
            parameters: sol.parameters(),
        }
    }

    /// True coefficients laid out along `terms`; fails if a true term is
    /// missing from the library.
    pub fn coefficient_vector(&self, terms: &[TermDescriptor]) -> Result<Vec<f64>> {
        let mut xi = vec![0.0; terms.len()];
        for (t, c) in self.true_support.iter().zip(&self.true_coefficients) {
            let k = terms
                .iter()
                .position(|s| s == t)
                .ok_or_else(|| Error::InvalidParameter(format!("library lacks true term `{t}`")))?;
            xi[k] = *c;
        }
        Ok(xi)
    }
}

/// Exact value and partials of the closed form at `point` (`[x, t]` or
/// `[x, y, t]`).
pub fn exact_bundle<T: Scalar>(
    sol: &ExactSolution,
    point: &[T],
    request: &DerivativeRequest,
) -> Result<DerivativeBundle<T>> {
    let kind = sol.kind();
    if point.len() != kind.spatial_dim() + 1 {
        return Err(Error::ShapeMismatch(format!("{kind} expects {} coordinates", kind.spatial_dim() + 1)));
    }
    request.check_supported(kind.spatial_dim())?;
    let shape = request.jet_shape();
    let axes = input_axes(point.len())?;
    let seeds: Vec<Jet<T>> = point.iter().zip(axes).map(|(v, a)| Jet::variable(shape, *a, *v)).collect();
    let jet: Jet<T> = sol.eval(&seeds);
    DerivativeBundle::from_jet(&jet, request)
}

/// [`exact_bundle`] over row-major points.
pub fn exact_bundles<T: Scalar>(
    sol: &ExactSolution,
    points: &[T],
    request: &DerivativeRequest,
) -> Result<Vec<DerivativeBundle<T>>> {
    let d = sol.kind().spatial_dim() + 1;
    points
        .chunks(d)
        .enumerate()
        .map(|(i, p)| exact_bundle(sol, p, request).map_err(|e| Error::at_point(i, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::preset_terms;

    #[test]
    fn truth_terms_belong_to_the_preset_library() {
        for kind in PdeKind::ALL {
            let truth = PdeTruth::for_solution(&ExactSolution::default_for(kind));
            let xi = truth.coefficient_vector(&preset_terms(kind)).unwrap();
            assert_eq!(xi.iter().filter(|c| **c != 0.0).count(), truth.true_support.len());
            assert!(truth.true_coefficients.iter().all(|c| c.is_finite() && *c != 0.0));
        }
    }

    #[test]
    fn exact_bundle_of_heat_obeys_the_equation() {
        let sol = ExactSolution::default_for(PdeKind::Heat);
        let req = DerivativeRequest::new([Partial::UT, Partial::UXX]);
        let b = exact_bundle(&sol, &[1.1_f64, 0.3], &req).unwrap();
        let (ut, uxx) = (b.get(Partial::UT).unwrap(), b.get(Partial::UXX).unwrap());
        assert!((ut - uxx).abs() < 1e-12 * uxx.abs().max(1.0));
    }
}
