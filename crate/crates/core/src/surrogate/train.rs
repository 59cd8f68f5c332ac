//! Mean-squared-error training with Adam / AdamW.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::ScatteredDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed;
use crate::surrogate::network::{ForwardScratch, InputScaling, Layer, OutputScaling, SurrogateParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    /// Adam with L2 weight decay folded into the gradient.
    Adam,
    /// Adam with decoupled weight decay.
    AdamW,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchSize {
    Full,
    #[serde(untagged)]
    Mini(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub optimizer: OptimizerKind,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub batch_size: BatchSize,
    pub epochs: usize,
    pub seed: u64,
    /// Fraction of rows held out for the validation curve; zero trains on
    /// every row.
    pub holdout_fraction: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Fit the network to standardised targets.
    #[serde(default)]
    pub standardize_output: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            optimizer: OptimizerKind::Adam,
            learning_rate: 1e-3,
            weight_decay: 0.0,
            batch_size: BatchSize::Full,
            epochs: 100,
            seed: 0,
            holdout_fraction: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            standardize_output: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        if self.batch_size == BatchSize::Mini(0) {
            return bad("batch size must be at least 1".into());
        }
        if !(self.weight_decay >= 0.0) {
            return bad("weight decay must be non-negative".into());
        }
        if !(0.0..1.0).contains(&self.holdout_fraction) {
            return bad(format!("holdout fraction must be in [0, 1), got {}", self.holdout_fraction));
        }
        Ok(())
    }
}

/// Per-epoch losses. `train[e]` is the mean batch loss seen during epoch
/// `e`; `holdout[e]` the held-out MSE after it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossTrace {
    pub initial_train_mse: f64,
    pub train: Vec<f64>,
    pub holdout: Vec<f64>,
    pub warning: Option<String>,
}

/// Holdout to train ratio above which the final epoch is flagged.
pub const HOLDOUT_WARNING_RATIO: f64 = 5.0;

/// Resumable training loop; [`train`] runs it to completion.
pub struct Trainer<'a, T> {
    data: &'a ScatteredDataset<T>,
    cfg: TrainConfig,
    params: SurrogateParams<T>,
    grads: Vec<Layer<T>>,
    m: Vec<Layer<T>>,
    v: Vec<Layer<T>>,
    step: i32,
    epoch: usize,
    rng: ChaCha8Rng,
    train_rows: Vec<usize>,
    holdout_rows: Vec<usize>,
    trace: LossTrace,
    acts: Vec<Vec<T>>,
    deltas: Vec<Vec<T>>,
}

impl<'a, T: Scalar> Trainer<'a, T> {
    /// `hidden` lists the hidden widths; input and output sizes come from
    /// the dataset.
    pub fn new(data: &'a ScatteredDataset<T>, hidden: &[usize], cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        if data.is_empty() {
            return Err(Error::InvalidParameter("cannot train on an empty dataset".into()));
        }
        let mut sizes = vec![data.dim()];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let scaling = InputScaling::from_domain(&data.domain);
        let mut params = SurrogateParams::init(&sizes, scaling, seed::derive(cfg.seed, "init"))?;

        let mut rows: Vec<usize> = (0..data.len()).collect();
        let mut split_rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, "holdout"));
        let holdout_n = if cfg.holdout_fraction > 0.0 && data.len() > 1 {
            ((cfg.holdout_fraction * data.len() as f64).round() as usize).clamp(1, data.len() - 1)
        } else {
            0
        };
        let (holdout_rows, train_rows) = if holdout_n > 0 {
            rows.shuffle(&mut split_rng);
            let (h, t) = rows.split_at(holdout_n);
            let (mut h, mut t) = (h.to_vec(), t.to_vec());
            h.sort_unstable();
            t.sort_unstable();
            (h, t)
        } else {
            (Vec::new(), rows)
        };

        if cfg.standardize_output {
            let train_values: Vec<T> = train_rows.iter().map(|&i| data.values[i]).collect();
            params.output = OutputScaling::standardizing(&train_values);
        }
        let zeros = |p: &SurrogateParams<T>| -> Vec<Layer<T>> {
            p.layers.iter().map(|l| Layer::zeros(l.inputs, l.outputs)).collect()
        };
        let acts = sizes.iter().map(|n| vec![T::zero(); *n]).collect();
        let deltas = sizes.iter().map(|n| vec![T::zero(); *n]).collect();
        let mut trainer = Trainer {
            data,
            grads: zeros(&params),
            m: zeros(&params),
            v: zeros(&params),
            params,
            step: 0,
            epoch: 0,
            rng: ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, "shuffle")),
            cfg,
            train_rows,
            holdout_rows,
            trace: LossTrace::default(),
            acts,
            deltas,
        };
        trainer.trace.initial_train_mse = trainer.mse_on(&trainer.train_rows);
        Ok(trainer)
    }

    pub fn params(&self) -> &SurrogateParams<T> {
        &self.params
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn trace(&self) -> &LossTrace {
        &self.trace
    }

    pub fn train_rows(&self) -> &[usize] {
        &self.train_rows
    }

    pub fn holdout_rows(&self) -> &[usize] {
        &self.holdout_rows
    }

    fn mse_on(&self, rows: &[usize]) -> f64 {
        if rows.is_empty() {
            return f64::NAN;
        }
        let mut scratch = ForwardScratch::new(&self.params);
        let ss: f64 = rows
            .iter()
            .map(|&i| {
                let r = self.params.forward_with(self.data.point(i), &mut scratch) - self.data.values[i];
                (r * r).as_f64()
            })
            .sum();
        ss / rows.len() as f64
    }

    /// Runs up to `n` more epochs (never past the configured total).
    pub fn run_epochs(&mut self, n: usize) -> Result<()> {
        let end = (self.epoch + n).min(self.cfg.epochs);
        while self.epoch < end {
            self.run_epoch()?;
        }
        if self.epoch == self.cfg.epochs {
            self.check_final_ratio();
        }
        Ok(())
    }

    /// Runs the remaining epochs.
    pub fn run_to_end(&mut self) -> Result<()> {
        self.run_epochs(self.cfg.epochs - self.epoch)
    }

    fn run_epoch(&mut self) -> Result<()> {
        let batch = match self.cfg.batch_size {
            BatchSize::Full => self.train_rows.len(),
            BatchSize::Mini(b) => b.min(self.train_rows.len()),
        };
        if self.cfg.batch_size != BatchSize::Full {
            self.train_rows.shuffle(&mut self.rng);
        }
        let rows = std::mem::take(&mut self.train_rows);
        let mut loss_sum = 0.0;
        for chunk in rows.chunks(batch) {
            let loss = self.batch_step(chunk);
            if !loss.is_finite() {
                self.train_rows = rows;
                return Err(Error::Diverged { epoch: self.epoch + 1, loss });
            }
            loss_sum += loss * chunk.len() as f64;
        }
        let train_loss = loss_sum / rows.len() as f64;
        self.train_rows = rows;
        self.epoch += 1;
        self.trace.train.push(train_loss);
        if !self.holdout_rows.is_empty() {
            let h = self.mse_on(&self.holdout_rows);
            if !h.is_finite() {
                return Err(Error::Diverged { epoch: self.epoch, loss: h });
            }
            self.trace.holdout.push(h);
        }
        Ok(())
    }

    fn check_final_ratio(&mut self) {
        if let (Some(t), Some(h)) = (self.trace.train.last(), self.trace.holdout.last()) {
            if *t > 0.0 && h / t > HOLDOUT_WARNING_RATIO {
                let msg = format!("holdout MSE {h:.4e} exceeds {HOLDOUT_WARNING_RATIO}x train MSE {t:.4e}");
                log::warn!("{msg}");
                self.trace.warning = Some(msg);
            }
        }
    }

    /// One optimiser step on `rows`; returns the batch MSE before the step.
    fn batch_step(&mut self, rows: &[usize]) -> f64 {
        for g in &mut self.grads {
            g.weights.iter_mut().for_each(|w| *w = T::zero());
            g.biases.iter_mut().for_each(|b| *b = T::zero());
        }
        let scale = T::lit(2.0 / rows.len() as f64);
        let nl = self.params.layers.len();
        let mut loss = T::zero();
        for &row in rows {
            // forward, keeping activations
            let d = self.params.input_dim();
            self.params.scaling.apply(self.data.point(row), &mut self.acts[0][..d]);
            for l in 0..nl {
                let (head, tail) = self.acts.split_at_mut(l + 1);
                let layer = &self.params.layers[l];
                layer.apply(&head[l], &mut tail[0]);
                if l + 1 < nl {
                    tail[0].iter_mut().for_each(|x| *x = x.tanh());
                }
            }
            let out = self.params.output.apply(self.acts[nl][0]);
            let resid = out - self.data.values[row];
            loss += resid * resid;
            // backward
            self.deltas[nl][0] = resid * scale * self.params.output.scale;
            for l in (0..nl).rev() {
                let layer = &self.params.layers[l];
                let grad = &mut self.grads[l];
                let input = &self.acts[l];
                let (lower, upper) = self.deltas.split_at_mut(l + 1);
                let delta_out = &upper[0];
                for o in 0..layer.outputs {
                    let d_o = delta_out[o];
                    grad.biases[o] += d_o;
                    let grow = &mut grad.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (g, a) in grow.iter_mut().zip(input) {
                        *g += d_o * *a;
                    }
                }
                if l > 0 {
                    let delta_in = &mut lower[l];
                    delta_in.iter_mut().for_each(|x| *x = T::zero());
                    for o in 0..layer.outputs {
                        let d_o = delta_out[o];
                        for (di, w) in delta_in.iter_mut().zip(layer.row(o)) {
                            *di += d_o * *w;
                        }
                    }
                    for (di, a) in delta_in.iter_mut().zip(input) {
                        *di *= T::one() - *a * *a;
                    }
                }
            }
        }
        self.adam_update();
        (loss / T::lit(rows.len() as f64)).as_f64()
    }

    fn adam_update(&mut self) {
        self.step += 1;
        let cfg = &self.cfg;
        let lr = T::lit(cfg.learning_rate);
        let wd = T::lit(cfg.weight_decay);
        let b1 = T::lit(cfg.beta1);
        let b2 = T::lit(cfg.beta2);
        let eps = T::lit(cfg.epsilon);
        let bc1 = T::one() - b1.powi(self.step);
        let bc2 = T::one() - b2.powi(self.step);
        let decoupled = cfg.optimizer == OptimizerKind::AdamW;
        for (((layer, grad), m), v) in self
            .params
            .layers
            .iter_mut()
            .zip(&self.grads)
            .zip(&mut self.m)
            .zip(&mut self.v)
        {
            let pairs = [
                (&mut layer.weights, &grad.weights, &mut m.weights, &mut v.weights),
                (&mut layer.biases, &grad.biases, &mut m.biases, &mut v.biases),
            ];
            for (theta, g, m, v) in pairs {
                for i in 0..theta.len() {
                    let mut gi = g[i];
                    if decoupled {
                        let shrink = lr * wd * theta[i];
                        theta[i] -= shrink;
                    } else if wd > T::zero() {
                        gi += wd * theta[i];
                    }
                    m[i] = b1 * m[i] + (T::one() - b1) * gi;
                    v[i] = b2 * v[i] + (T::one() - b2) * gi * gi;
                    let mhat = m[i] / bc1;
                    let vhat = v[i] / bc2;
                    theta[i] -= lr * mhat / (vhat.sqrt() + eps);
                }
            }
        }
    }

    pub fn finish(self) -> (SurrogateParams<T>, LossTrace) {
        (self.params, self.trace)
    }
}

/// Fits a tanh network with the given hidden widths to `data`.
pub fn train<T: Scalar>(
    data: &ScatteredDataset<T>,
    hidden: &[usize],
    cfg: &TrainConfig,
) -> Result<(SurrogateParams<T>, LossTrace)> {
    let mut trainer = Trainer::new(data, hidden, cfg.clone())?;
    trainer.run_to_end()?;
    Ok(trainer.finish())
}
