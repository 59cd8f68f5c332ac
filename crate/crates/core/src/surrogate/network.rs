//! Fully connected tanh network with an affine input normalisation and a
//! linear output head.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::DomainSpec;
use crate::error::{Error, Result};
use crate::jet::{Axis, Jet, JetShape};
use crate::scalar::{Scalar, Smooth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Identity,
    /// Representable so foreign checkpoints can be loaded and rejected.
    Relu,
}

impl Activation {
    pub fn is_smooth(&self) -> bool {
        !matches!(self, Activation::Relu)
    }
}

/// One affine layer; `weights` is `outputs x inputs`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer<T> {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<T>,
    pub biases: Vec<T>,
}

impl<T: Scalar> Layer<T> {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Layer {
            inputs,
            outputs,
            weights: vec![T::zero(); inputs * outputs],
            biases: vec![T::zero(); outputs],
        }
    }

    #[inline]
    pub fn row(&self, o: usize) -> &[T] {
        &self.weights[o * self.inputs..(o + 1) * self.inputs]
    }

    /// `out = W x + b`.
    #[inline]
    pub fn apply(&self, x: &[T], out: &mut [T]) {
        for (o, slot) in out.iter_mut().enumerate() {
            let mut acc = self.biases[o];
            for (w, v) in self.row(o).iter().zip(x) {
                acc += *w * *v;
            }
            *slot = acc;
        }
    }
}

/// Per-axis affine map of physical inputs onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputScaling<T> {
    pub center: Vec<T>,
    pub half_width: Vec<T>,
}

impl<T: Scalar> InputScaling<T> {
    pub fn identity(dim: usize) -> Self {
        InputScaling { center: vec![T::zero(); dim], half_width: vec![T::one(); dim] }
    }

    pub fn from_domain(domain: &DomainSpec) -> Self {
        let (center, half_width) = domain
            .bounds()
            .iter()
            .map(|[lo, hi]| (T::lit(0.5 * (lo + hi)), T::lit(0.5 * (hi - lo))))
            .unzip();
        InputScaling { center, half_width }
    }

    #[inline]
    pub fn apply(&self, point: &[T], out: &mut [T]) {
        for i in 0..out.len() {
            out[i] = (point[i] - self.center[i]) / self.half_width[i];
        }
    }
}

/// Affine map `u = scale * y + shift` from the network's raw output `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputScaling<T> {
    pub shift: T,
    pub scale: T,
}

impl<T: Scalar> OutputScaling<T> {
    pub fn identity() -> Self {
        OutputScaling { shift: T::zero(), scale: T::one() }
    }

    /// Maps standardised outputs back to values with this mean and spread.
    pub fn standardizing(values: &[T]) -> Self {
        if values.is_empty() {
            return Self::identity();
        }
        let n = T::lit(values.len() as f64);
        let mean = values.iter().fold(T::zero(), |a, v| a + *v) / n;
        let var = values.iter().fold(T::zero(), |a, v| a + (*v - mean) * (*v - mean)) / n;
        let scale = if var > T::zero() { var.sqrt() } else { T::one() };
        OutputScaling { shift: mean, scale }
    }

    #[inline]
    pub fn apply(&self, y: T) -> T {
        y * self.scale + self.shift
    }
}

/// Parameters of the surrogate `u(x[, y], t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogateParams<T> {
    pub layer_sizes: Vec<usize>,
    pub layers: Vec<Layer<T>>,
    pub hidden_activation: Activation,
    pub output_activation: Activation,
    pub scaling: InputScaling<T>,
    pub output: OutputScaling<T>,
}

impl<T: Scalar> SurrogateParams<T> {
    /// All-zero network of the given layer sizes.
    pub fn zeros(layer_sizes: &[usize], scaling: InputScaling<T>) -> Result<Self> {
        check_sizes(layer_sizes)?;
        let layers = layer_sizes.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect();
        let params = SurrogateParams {
            layer_sizes: layer_sizes.to_vec(),
            layers,
            hidden_activation: Activation::Tanh,
            output_activation: Activation::Identity,
            scaling,
            output: OutputScaling::identity(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Symmetric uniform initialisation in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`
    /// for weights and biases.
    pub fn init(layer_sizes: &[usize], scaling: InputScaling<T>, seed: u64) -> Result<Self> {
        let mut params = Self::zeros(layer_sizes, scaling)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for layer in &mut params.layers {
            let bound = 1.0 / (layer.inputs as f64).sqrt();
            for w in layer.weights.iter_mut().chain(layer.biases.iter_mut()) {
                *w = T::lit(rng.random_range(-bound..=bound));
            }
        }
        Ok(params)
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// Shapes chain, entries finite, hidden activation smooth, scalar head.
    pub fn validate(&self) -> Result<()> {
        check_sizes(&self.layer_sizes)?;
        if !self.hidden_activation.is_smooth() || !self.output_activation.is_smooth() {
            return Err(Error::InvalidParameter(
                "activations must be infinitely differentiable for input derivatives".into(),
            ));
        }
        if self.layers.len() + 1 != self.layer_sizes.len() {
            return Err(Error::ShapeMismatch("layer count does not match layer sizes".into()));
        }
        for (l, (layer, w)) in self.layers.iter().zip(self.layer_sizes.windows(2)).enumerate() {
            if layer.inputs != w[0]
                || layer.outputs != w[1]
                || layer.weights.len() != w[0] * w[1]
                || layer.biases.len() != w[1]
            {
                return Err(Error::ShapeMismatch(format!("layer {l} does not chain as {} -> {}", w[0], w[1])));
            }
            if layer.weights.iter().chain(&layer.biases).any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("layer {l} has non-finite entries")));
            }
        }
        let d = self.input_dim();
        if self.scaling.center.len() != d || self.scaling.half_width.len() != d {
            return Err(Error::ShapeMismatch("input scaling does not match input dimension".into()));
        }
        if self.scaling.half_width.iter().any(|h| *h <= T::zero() || !h.is_finite()) {
            return Err(Error::InvalidParameter("input scaling widths must be positive".into()));
        }
        if !(self.output.scale > T::zero()) || !self.output.scale.is_finite() || !self.output.shift.is_finite() {
            return Err(Error::InvalidParameter("output scaling must be finite with positive scale".into()));
        }
        Ok(())
    }

    fn check_point(&self, point: &[T]) -> Result<()> {
        if point.len() != self.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, network expects {}",
                point.len(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Network output at a physical point.
    pub fn forward(&self, point: &[T]) -> Result<T> {
        self.check_point(point)?;
        let mut scratch = ForwardScratch::new(self);
        Ok(self.forward_with(point, &mut scratch))
    }

    /// Allocation-free forward pass; `point` must have the input dimension.
    pub fn forward_with(&self, point: &[T], scratch: &mut ForwardScratch<T>) -> T {
        let d = self.input_dim();
        self.scaling.apply(point, &mut scratch.a[..d]);
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            layer.apply(&scratch.a[..layer.inputs], &mut scratch.b[..layer.outputs]);
            let act = if l == last { self.output_activation } else { self.hidden_activation };
            apply_activation(act, &mut scratch.b[..layer.outputs]);
            std::mem::swap(&mut scratch.a, &mut scratch.b);
        }
        self.output.apply(scratch.a[0])
    }

    /// Forward pass over any [`Smooth`] input type.
    pub fn eval<S: Smooth<T>>(&self, point: &[S]) -> S {
        let mut h: Vec<S> = point
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone() - self.scaling.center[i]) / self.scaling.half_width[i])
            .collect();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let act = if l == last { self.output_activation } else { self.hidden_activation };
            h = (0..layer.outputs)
                .map(|o| {
                    let mut acc = h[0].constant_like(layer.biases[o]);
                    for (w, v) in layer.row(o).iter().zip(&h) {
                        acc = acc + v.clone() * *w;
                    }
                    match act {
                        Activation::Tanh => acc.tanh(),
                        _ => acc,
                    }
                })
                .collect();
        }
        let y = h.swap_remove(0);
        y.clone() * self.output.scale + y.constant_like(self.output.shift)
    }

    /// Taylor-mode forward pass: input axis `i` is seeded as `axes[i]`.
    pub fn eval_jet(&self, point: &[T], axes: &[Axis], shape: JetShape) -> Jet<T> {
        let mut h: Vec<Jet<T>> = point
            .iter()
            .zip(axes)
            .enumerate()
            .map(|(i, (p, axis))| {
                (Jet::variable(shape, *axis, *p) - self.scaling.center[i]) / self.scaling.half_width[i]
            })
            .collect();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let act = if l == last { self.output_activation } else { self.hidden_activation };
            h = (0..layer.outputs)
                .map(|o| {
                    let mut acc = Jet::constant(shape, layer.biases[o]);
                    for (w, v) in layer.row(o).iter().zip(&h) {
                        acc.axpy(*w, v);
                    }
                    match act {
                        Activation::Tanh => acc.tanh(),
                        _ => acc,
                    }
                })
                .collect();
        }
        h.swap_remove(0) * self.output.scale + self.output.shift
    }
}

fn check_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 || layer_sizes.contains(&0) {
        return Err(Error::ShapeMismatch(format!("invalid layer sizes {layer_sizes:?}")));
    }
    if *layer_sizes.last().unwrap() != 1 {
        return Err(Error::ShapeMismatch("the network must have a single output".into()));
    }
    Ok(())
}

#[inline]
pub(crate) fn apply_activation<T: Scalar>(act: Activation, v: &mut [T]) {
    match act {
        Activation::Tanh => v.iter_mut().for_each(|x| *x = x.tanh()),
        Activation::Identity => {}
        Activation::Relu => v.iter_mut().for_each(|x| *x = x.max(T::zero())),
    }
}

/// Reusable buffers for [`SurrogateParams::forward_with`].
pub struct ForwardScratch<T> {
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: Scalar> ForwardScratch<T> {
    pub fn new(params: &SurrogateParams<T>) -> Self {
        let width = *params.layer_sizes.iter().max().unwrap();
        ForwardScratch { a: vec![T::zero(); width], b: vec![T::zero(); width] }
    }
}

/// Saved network; shortest round-trip decimals make reloading bit-exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint<T> {
    pub preset: Option<String>,
    pub epochs: usize,
    pub seed: u64,
    pub params: SurrogateParams<T>,
}

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> Checkpoint<T> {
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let ckpt: Checkpoint<T> = serde_json::from_str(&fs::read_to_string(path)?)?;
        ckpt.params.validate()?;
        Ok(ckpt)
    }
}
