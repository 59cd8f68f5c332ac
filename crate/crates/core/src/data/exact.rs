//! Closed-form solutions of the four benchmark PDEs.
//!
//! Every generator is generic over [`Smooth`], so evaluating it on seeded
//! [`Jet`](crate::jet::Jet)s gives the exact space-time partial derivatives
//! used as ground truth.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Smooth};

/// The four benchmark equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PdeKind {
    Burgers,
    Heat,
    Kdv,
    #[serde(rename = "advdiff")]
    AdvDiff,
}

impl PdeKind {
    pub const ALL: [PdeKind; 4] = [PdeKind::Burgers, PdeKind::Heat, PdeKind::Kdv, PdeKind::AdvDiff];

    pub fn name(&self) -> &'static str {
        match self {
            PdeKind::Burgers => "burgers",
            PdeKind::Heat => "heat",
            PdeKind::Kdv => "kdv",
            PdeKind::AdvDiff => "advdiff",
        }
    }

    pub fn spatial_dim(&self) -> usize {
        match self {
            PdeKind::AdvDiff => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for PdeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PdeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "burgers" => Ok(PdeKind::Burgers),
            "heat" => Ok(PdeKind::Heat),
            "kdv" => Ok(PdeKind::Kdv),
            "advdiff" | "advection-diffusion" => Ok(PdeKind::AdvDiff),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Log-sum-exp shift: largest value among the exponents.
fn max_value<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().fold(T::neg_infinity(), T::max)
}

/// Viscous Burgers' field from the Cole-Hopf transform of two Gaussians,
/// `u = 4 - 2 nu phi_x / phi` with
/// `phi = exp(-(x-4t)^2 / (4 nu (t+1))) + exp(-(x-4t-2 pi)^2 / (4 nu (t+1)))`.
pub fn burgers_exact<T: Scalar, S: Smooth<T>>(x: S, t: S, nu: T) -> S {
    let four = T::lit(4.0);
    let width = (t.clone() + T::one()) * (four * nu);
    let xi0 = x - t.clone() * four;
    let xi1 = xi0.clone() - T::lit(2.0 * PI);
    let e0 = -(xi0.square()) / width.clone();
    let e1 = -(xi1.square()) / width.clone();
    let shift = max_value(&[e0.value(), e1.value()]);
    let w0 = (e0 - shift).exp();
    let w1 = (e1 - shift).exp();
    // phi_x / phi = -2 (w0 xi0 + w1 xi1) / (width (w0 + w1))
    let ratio = (w0.clone() * xi0 + w1.clone() * xi1) / ((w0 + w1) * width);
    ratio * (T::lit(4.0) * nu) + four
}

/// Sine-series coefficients `D_q` of `x^2 sin(x)` on `[0, pi]`, by
/// composite Simpson quadrature with `panels` (even) sub-intervals.
pub fn heat_sine_coefficients(modes: usize, panels: usize) -> Result<Vec<f64>> {
    if modes < 1 {
        return Err(Error::InvalidParameter("heat series needs at least one mode".into()));
    }
    if panels < 2 || panels % 2 != 0 {
        return Err(Error::InvalidParameter(format!("Simpson needs an even panel count, got {panels}")));
    }
    let h = PI / panels as f64;
    let coeffs = (1..=modes)
        .map(|q| {
            let f = |x: f64| x * x * x.sin() * (q as f64 * x).sin();
            let mut sum = f(0.0) + f(PI);
            for i in 1..panels {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * f(i as f64 * h);
            }
            2.0 / PI * sum * h / 3.0
        })
        .collect();
    Ok(coeffs)
}

/// `sum_q D_q exp(-nu q^2 t) sin(q x)`.
pub fn heat_series<T: Scalar, S: Smooth<T>>(x: S, t: S, nu: T, coefficients: &[f64]) -> S {
    let mut acc = x.constant_like(T::zero());
    for (i, d) in coefficients.iter().enumerate() {
        let q = T::lit((i + 1) as f64);
        let decay = (t.clone() * (-nu * q * q)).exp();
        acc = acc + (x.clone() * q).sin() * decay * T::lit(*d);
    }
    acc
}

/// Heat solution with `modes` sine modes of `x^2 sin(x)` (2048 Simpson panels).
pub fn heat_exact(x: f64, t: f64, nu: f64, modes: usize) -> Result<f64> {
    require_positive("nu", nu)?;
    let coeffs = heat_sine_coefficients(modes, 2048)?;
    Ok(heat_series(x, t, nu, &coeffs))
}

/// Single KdV soliton `(c/2) sech^2(sqrt(c)/2 (x - c t - a))`.
pub fn kdv_soliton<T: Scalar, S: Smooth<T>>(x: S, t: S, c: T, a: T) -> S {
    let arg = (x - t * c - a) * (c.sqrt() * T::lit(0.5));
    let th = arg.tanh();
    (-(th.square()) + T::one()) * (c * T::lit(0.5))
}

/// Two-soliton solution parameters of `u_t + beta u u_x + u_xxx = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdvParams {
    pub c1: f64,
    pub c2: f64,
    pub a1: f64,
    pub a2: f64,
    pub beta: f64,
}

impl KdvParams {
    pub fn new(c1: f64, c2: f64, a1: f64, a2: f64) -> Result<Self> {
        Self::with_coefficient(c1, c2, a1, a2, 6.0)
    }

    pub fn with_coefficient(c1: f64, c2: f64, a1: f64, a2: f64, beta: f64) -> Result<Self> {
        require_positive("soliton speed c1", c1)?;
        require_positive("soliton speed c2", c2)?;
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::InvalidParameter("KdV nonlinear coefficient must be nonzero".into()));
        }
        Ok(KdvParams { c1, c2, a1, a2, beta })
    }
}

impl Default for KdvParams {
    fn default() -> Self {
        KdvParams { c1: 5.0, c2: 2.0, a1: -2.0, a2: 2.0, beta: 6.0 }
    }
}

/// Exact interacting two-soliton (Hirota form)
/// `u = (12 / beta) d^2/dx^2 ln F`, `F = 1 + E1 + E2 + A E1 E2`,
/// `E_i = exp(k_i (x - a_i) - k_i^3 t)`, `k_i = sqrt(c_i)`,
/// `A = ((k1 - k2) / (k1 + k2))^2`. Each component is the soliton
/// `(c_i/2) sech^2(...)` (for beta = 6) away from the interaction region.
pub fn kdv_two_soliton<T: Scalar, S: Smooth<T>>(x: S, t: S, p: &KdvParams) -> S {
    let k1 = T::lit(p.c1.sqrt());
    let k2 = T::lit(p.c2.sqrt());
    let eta1 = (x.clone() - T::lit(p.a1)) * k1 - t.clone() * (k1 * k1 * k1);
    let eta2 = (x - T::lit(p.a2)) * k2 - t * (k2 * k2 * k2);
    let interaction = ((p.c1.sqrt() - p.c2.sqrt()) / (p.c1.sqrt() + p.c2.sqrt())).powi(2);
    let (v1, v2) = (eta1.value(), eta2.value());
    let mut exps = vec![T::zero(), v1, v2];
    if interaction > 0.0 {
        exps.push(v1 + v2 + T::lit(interaction.ln()));
    }
    let shift = max_value(&exps);
    let e1 = (eta1.clone() - shift).exp();
    let e2 = (eta2.clone() - shift).exp();
    let base = eta1.constant_like((-shift).exp());
    let e12 = (eta1 + eta2 - shift).exp() * T::lit(interaction);
    let ksum = k1 + k2;
    let f = base + e1.clone() + e2.clone() + e12.clone();
    let fx = e1.clone() * k1 + e2.clone() * k2 + e12.clone() * ksum;
    let fxx = e1 * (k1 * k1) + e2 * (k2 * k2) + e12 * (ksum * ksum);
    let num = f.clone() * fxx - fx.square();
    num / f.square() * T::lit(12.0 / p.beta)
}

/// Parameters of the spreading, drifting Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvDiffParams {
    pub velocity: [f64; 2],
    pub diffusivity: f64,
    pub center: [f64; 2],
    pub t0: f64,
    pub amplitude: f64,
}

impl AdvDiffParams {
    pub fn new(velocity: [f64; 2], diffusivity: f64, center: [f64; 2], t0: f64, amplitude: f64) -> Result<Self> {
        require_positive("diffusivity K", diffusivity)?;
        require_positive("time offset t0", t0)?;
        Ok(AdvDiffParams { velocity, diffusivity, center, t0, amplitude })
    }
}

impl Default for AdvDiffParams {
    fn default() -> Self {
        AdvDiffParams {
            velocity: [0.25, 0.5],
            diffusivity: 0.5,
            center: [1.0, 1.0],
            t0: 0.5,
            amplitude: 1.0,
        }
    }
}

/// Free-space fundamental solution of `u_t + c.grad u = K lap u`:
/// `A / (4 pi K (t + t0)) exp(-|r - r0 - c t|^2 / (4 K (t + t0)))`.
pub fn advdiff_exact<T: Scalar, S: Smooth<T>>(x: S, y: S, t: S, p: &AdvDiffParams) -> S {
    let k = T::lit(p.diffusivity);
    let spread = (t.clone() + T::lit(p.t0)) * (T::lit(4.0) * k);
    let dx = x - T::lit(p.center[0]) - t.clone() * T::lit(p.velocity[0]);
    let dy = y - T::lit(p.center[1]) - t * T::lit(p.velocity[1]);
    let expo = -(dx.square() + dy.square()) / spread.clone();
    expo.exp() / spread * T::lit(p.amplitude / PI)
}

/// A closed-form solution with its parameters, evaluated on `(x[, y], t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pde", rename_all = "lowercase")]
pub enum ExactSolution {
    Burgers { nu: f64 },
    Heat { nu: f64, coefficients: Vec<f64> },
    Kdv(KdvParams),
    #[serde(rename = "advdiff")]
    AdvDiff(AdvDiffParams),
}

impl ExactSolution {
    pub fn burgers(nu: f64) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(ExactSolution::Burgers { nu })
    }

    pub fn heat(nu: f64, modes: usize) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(ExactSolution::Heat { nu, coefficients: heat_sine_coefficients(modes, 2048)? })
    }

    /// Default parameters of each benchmark.
    pub fn default_for(kind: PdeKind) -> Self {
        match kind {
            PdeKind::Burgers => ExactSolution::Burgers { nu: 0.5 },
            PdeKind::Heat => ExactSolution::heat(1.0, 32).expect("valid defaults"),
            PdeKind::Kdv => ExactSolution::Kdv(KdvParams::default()),
            PdeKind::AdvDiff => ExactSolution::AdvDiff(AdvDiffParams::default()),
        }
    }

    pub fn kind(&self) -> PdeKind {
        match self {
            ExactSolution::Burgers { .. } => PdeKind::Burgers,
            ExactSolution::Heat { .. } => PdeKind::Heat,
            ExactSolution::Kdv(_) => PdeKind::Kdv,
            ExactSolution::AdvDiff(_) => PdeKind::AdvDiff,
        }
    }

    /// Evaluates the field at `coords = [x, t]` or `[x, y, t]`.
    pub fn eval<T: Scalar, S: Smooth<T>>(&self, coords: &[S]) -> S {
        match self {
            ExactSolution::Burgers { nu } => {
                burgers_exact(coords[0].clone(), coords[1].clone(), T::lit(*nu))
            }
            ExactSolution::Heat { nu, coefficients } => {
                heat_series(coords[0].clone(), coords[1].clone(), T::lit(*nu), coefficients)
            }
            ExactSolution::Kdv(p) => kdv_two_soliton(coords[0].clone(), coords[1].clone(), p),
            ExactSolution::AdvDiff(p) => {
                advdiff_exact(coords[0].clone(), coords[1].clone(), coords[2].clone(), p)
            }
        }
    }

    /// Named parameters for metadata files.
    pub fn parameters(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            ExactSolution::Burgers { nu } => {
                m.insert("nu".into(), *nu);
            }
            ExactSolution::Heat { nu, coefficients } => {
                m.insert("nu".into(), *nu);
                m.insert("modes".into(), coefficients.len() as f64);
            }
            ExactSolution::Kdv(p) => {
                m.insert("c1".into(), p.c1);
                m.insert("c2".into(), p.c2);
                m.insert("a1".into(), p.a1);
                m.insert("a2".into(), p.a2);
                m.insert("beta".into(), p.beta);
            }
            ExactSolution::AdvDiff(p) => {
                m.insert("cx".into(), p.velocity[0]);
                m.insert("cy".into(), p.velocity[1]);
                m.insert("K".into(), p.diffusivity);
                m.insert("x0".into(), p.center[0]);
                m.insert("y0".into(), p.center[1]);
                m.insert("t0".into(), p.t0);
                m.insert("A".into(), p.amplitude);
            }
        }
        m
    }
}
