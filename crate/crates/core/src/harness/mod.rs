//! Experiment grids, presets and reporting.

pub mod config;
pub mod equation;
pub mod grid;
pub mod plot;
pub mod preset;
pub mod report;
pub mod trial;

pub use config::{ExperimentConfig, DEFAULT_TRIALS_PER_CELL, WORKERS_ENV};
pub use equation::{format_equation, parse_equation};
pub use grid::{run_grid, trial_seed, worker_count, CellResult, GridResult};
pub use plot::evolution_svg;
pub use preset::{EnsembleSettings, Preset, PresetOverrides};
pub use report::{emit_report, ReportFormat};
pub use trial::{discover, epoch_evolution, execute, run_trial, CheckpointSnapshot, StageSeeds, TrialOutcome, TrialRun};
