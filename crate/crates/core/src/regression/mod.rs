//! Sparse regression over a term library.

pub mod best_subset;
pub mod ensemble;
pub mod model;
pub mod normal;
pub mod stlsq;

pub use best_subset::{best_subset, COMPLEXITY_FLOOR, MAX_ENUMERATED_COLUMNS};
pub use ensemble::{
    aggregate, ensemble_discover, replicate_rows, subsample_size, EnsembleResult, DEFAULT_INCLUSION_CUTOFF,
    DEFAULT_REPLICATES, DEFAULT_SUBSAMPLE_FRACTION,
};
pub use model::{BestSubsetConfig, Complexity, SolverKind, SolverSpec, SparseModel, StlsqConfig};
pub use normal::{ridge_solve, NormalEquations};
pub use stlsq::{stlsq, stlsq_from, StlsqRun};
