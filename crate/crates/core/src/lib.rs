//! Mesh-free discovery of partial differential equations from scattered,
//! noisy samples.
//!
//! A tanh network is fitted to `(x, [y,] t) -> u`, its input derivatives are
//! read off with truncated Taylor arithmetic, and a sparse regression over a
//! library of candidate terms picks the governing equation.

pub mod data;
pub mod derivative;
pub mod dictionary;
pub mod error;
pub mod harness;
pub mod jet;
pub mod linalg;
pub mod metrics;
pub mod regression;
pub mod scalar;
pub mod seed;
pub mod surrogate;

pub use error::{Error, Result};
pub use scalar::{Scalar, Smooth};

/// Double-precision Taylor jet.
pub type Jet64 = jet::Jet<f64>;
/// Double-precision scattered dataset.
pub type Dataset64 = data::ScatteredDataset<f64>;
/// Double-precision surrogate parameters.
pub type Surrogate64 = surrogate::SurrogateParams<f64>;
/// Double-precision candidate library.
pub type Dictionary64 = dictionary::Dictionary<f64>;
/// Double-precision sparse model.
pub type SparseModel64 = regression::SparseModel<f64>;
