//! Neural response surface: network, training and input derivatives.

pub mod derivatives;
pub mod network;
pub mod train;

pub use derivatives::{batch_bundles, input_axes, input_derivatives};
pub use network::{Activation, Checkpoint, ForwardScratch, InputScaling, Layer, OutputScaling, SurrogateParams};
pub use train::{train, BatchSize, LossTrace, OptimizerKind, TrainConfig, Trainer};
