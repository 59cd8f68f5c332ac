//! Exact input derivatives of a trained surrogate by Taylor-mode
//! propagation through the layers.

use rayon::prelude::*;

use crate::derivative::{DerivativeBundle, DerivativeRequest};
use crate::error::{Error, Result};
use crate::jet::Axis;
use crate::scalar::Scalar;
use crate::surrogate::network::SurrogateParams;

/// Axis seeding for a network input dimension: `[x]`, `[x, t]` or
/// `[x, y, t]`.
pub fn input_axes(dim: usize) -> Result<&'static [Axis]> {
    match dim {
        1 => Ok(&[Axis::X]),
        2 => Ok(&[Axis::X, Axis::T]),
        3 => Ok(&[Axis::X, Axis::Y, Axis::T]),
        _ => Err(Error::ShapeMismatch(format!("unsupported input dimension {dim}"))),
    }
}

fn check_request<T: Scalar>(params: &SurrogateParams<T>, request: &DerivativeRequest) -> Result<()> {
    let dim = params.input_dim();
    let spatial_dim = if dim == 3 { 2 } else { 1 };
    request.check_supported(spatial_dim)?;
    if dim == 1 && request.partials().any(|p| p.t > 0) {
        return Err(Error::UnsupportedOrder("time derivative of a network without a time input".into()));
    }
    Ok(())
}

/// Value and requested partials of the surrogate at `point`, in physical
/// units.
pub fn input_derivatives<T: Scalar>(
    params: &SurrogateParams<T>,
    point: &[T],
    request: &DerivativeRequest,
) -> Result<DerivativeBundle<T>> {
    check_request(params, request)?;
    if point.len() != params.input_dim() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, network expects {}",
            point.len(),
            params.input_dim()
        )));
    }
    let axes = input_axes(params.input_dim())?;
    let jet = params.eval_jet(point, axes, request.jet_shape());
    DerivativeBundle::from_jet(&jet, request)
}

/// [`input_derivatives`] over row-major `points`; order-preserving, and a
/// failure names the offending row.
pub fn batch_bundles<T: Scalar>(
    params: &SurrogateParams<T>,
    points: &[T],
    request: &DerivativeRequest,
) -> Result<Vec<DerivativeBundle<T>>> {
    check_request(params, request)?;
    let d = params.input_dim();
    if points.len() % d != 0 {
        return Err(Error::ShapeMismatch(format!("{} coordinates do not split into rows of {d}", points.len())));
    }
    points
        .par_chunks(d)
        .enumerate()
        .map(|(i, p)| input_derivatives(params, p, request).map_err(|e| Error::at_point(i, e)))
        .collect()
}
