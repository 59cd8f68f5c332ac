//! Ground-truth fields, scattered sampling and noise.

pub mod dataset;
pub mod exact;
pub mod io;
pub mod truth;

pub use dataset::{inject_noise, sample_scattered, sample_std, DomainSpec, ScatteredDataset};
pub use exact::{
    advdiff_exact, burgers_exact, heat_exact, heat_series, heat_sine_coefficients, kdv_soliton,
    kdv_two_soliton, AdvDiffParams, ExactSolution, KdvParams, PdeKind,
};
pub use truth::{exact_bundle, exact_bundles, PdeTruth};
