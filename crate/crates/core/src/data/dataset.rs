//! Space-time domains, scattered samples and noise injection.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::exact::PdeKind;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Axis-aligned space-time box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub spatial: Vec<[f64; 2]>,
    pub time: [f64; 2],
}

impl DomainSpec {
    pub fn new(spatial: Vec<[f64; 2]>, time: [f64; 2]) -> Result<Self> {
        if spatial.is_empty() || spatial.len() > 2 {
            return Err(Error::InvalidDomain(format!(
                "spatial dimension must be 1 or 2, got {}",
                spatial.len()
            )));
        }
        for (axis, [lo, hi]) in spatial.iter().chain(std::iter::once(&time)).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidDomain(format!("axis {axis}: [{lo}, {hi}] is not a proper interval")));
            }
        }
        Ok(DomainSpec { spatial, time })
    }

    /// Default benchmark domain of each PDE.
    pub fn default_for(kind: PdeKind) -> Self {
        match kind {
            PdeKind::Burgers => DomainSpec { spatial: vec![[0.0, 2.0 * PI]], time: [0.0, 1.0] },
            PdeKind::Heat => DomainSpec { spatial: vec![[0.0, PI]], time: [0.0, 1.0] },
            PdeKind::Kdv => DomainSpec { spatial: vec![[-10.0, 10.0]], time: [0.0, 1.0] },
            PdeKind::AdvDiff => DomainSpec {
                spatial: vec![[-4.0, 6.0], [-4.0, 6.0]],
                time: [0.0, 2.0],
            },
        }
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial.len()
    }

    /// Number of network inputs: spatial axes plus time.
    pub fn input_dim(&self) -> usize {
        self.spatial.len() + 1
    }

    /// Bounds of every input axis in `(x[, y], t)` order.
    pub fn bounds(&self) -> Vec<[f64; 2]> {
        let mut b = self.spatial.clone();
        b.push(self.time);
        b
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.input_dim()
            && self.bounds().iter().zip(point).all(|([lo, hi], v)| *lo <= *v && *v <= *hi)
    }

    /// Bounds shrunk towards the centre by `fraction` of each width.
    pub fn interior(&self, fraction: f64) -> DomainSpec {
        let shrink = |[lo, hi]: [f64; 2]| {
            let pad = (hi - lo) * fraction;
            [lo + pad, hi - pad]
        };
        DomainSpec {
            spatial: self.spatial.iter().copied().map(shrink).collect(),
            time: shrink(self.time),
        }
    }
}

/// Scattered observations `(x[, y], t, u)` over a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteredDataset<T> {
    /// Row-major coordinates, `domain.input_dim()` per row.
    pub coords: Vec<T>,
    pub values: Vec<T>,
    pub domain: DomainSpec,
    pub noise_level: f64,
    pub seed: u64,
    pub noise_seed: Option<u64>,
    pub pde: Option<PdeKind>,
    pub parameters: BTreeMap<String, f64>,
}

impl<T: Scalar> ScatteredDataset<T> {
    /// Checks row counts and domain membership.
    pub fn new(coords: Vec<T>, values: Vec<T>, domain: DomainSpec) -> Result<Self> {
        let d = domain.input_dim();
        if values.is_empty() || coords.len() != values.len() * d {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for {} values in {d} dimensions",
                coords.len(),
                values.len()
            )));
        }
        let ds = ScatteredDataset {
            coords,
            values,
            domain,
            noise_level: 0.0,
            seed: 0,
            noise_seed: None,
            pde: None,
            parameters: BTreeMap::new(),
        };
        for i in 0..ds.len() {
            let p: Vec<f64> = ds.point(i).iter().map(|v| v.as_f64()).collect();
            if !ds.domain.contains(&p) {
                return Err(Error::InvalidDomain(format!("point {i} {p:?} lies outside the domain")));
            }
        }
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.input_dim()
    }

    pub fn point(&self, i: usize) -> &[T] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks_exact(self.dim())
    }

    /// Rows `indices` as a new dataset with the same metadata.
    pub fn select(&self, indices: &[usize]) -> ScatteredDataset<T> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim());
        let mut values = Vec::with_capacity(indices.len());
        for &i in indices {
            coords.extend_from_slice(self.point(i));
            values.push(self.values[i]);
        }
        ScatteredDataset { coords, values, ..self.clone() }
    }
}

/// Draws `n` points uniformly over the domain box and evaluates `solution`
/// at each. Identical seeds give bit-identical datasets.
pub fn sample_scattered<T: Scalar>(
    solution: impl Fn(&[T]) -> T,
    domain: &DomainSpec,
    n: usize,
    seed: u64,
) -> Result<ScatteredDataset<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let bounds = domain.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * bounds.len());
    let mut values = Vec::with_capacity(n);
    let mut point = vec![T::zero(); bounds.len()];
    for _ in 0..n {
        for (slot, [lo, hi]) in point.iter_mut().zip(&bounds) {
            *slot = T::lit(rng.random_range(*lo..=*hi));
        }
        values.push(solution(&point));
        coords.extend_from_slice(&point);
    }
    Ok(ScatteredDataset {
        coords,
        values,
        domain: domain.clone(),
        noise_level: 0.0,
        seed,
        noise_seed: None,
        pde: None,
        parameters: BTreeMap::new(),
    })
}

/// Sample standard deviation (n - 1 denominator; zero for a single value).
pub fn sample_std<T: Scalar>(values: &[T]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().map(|v| v.as_f64()).sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v.as_f64() - mean).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Adds i.i.d. Gaussian noise with standard deviation `level * std(values)`.
///
/// Noise is injected exactly once: a dataset that already carries noise is
/// rejected so the recorded `noise_level` is always the level applied.
pub fn inject_noise<T: Scalar>(ds: &ScatteredDataset<T>, level: f64, seed: u64) -> Result<ScatteredDataset<T>> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise level must be >= 0, got {level}")));
    }
    if ds.noise_level != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dataset already carries {} noise; inject once from clean values",
            ds.noise_level
        )));
    }
    let mut out = ds.clone();
    out.noise_level = level;
    out.noise_seed = Some(seed);
    if level == 0.0 {
        return Ok(out);
    }
    let sigma = level * sample_std(&ds.values);
    if sigma == 0.0 {
        return Ok(out);
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in &mut out.values {
        *v = T::lit(v.as_f64() + normal.sample(&mut rng));
    }
    Ok(out)
}
