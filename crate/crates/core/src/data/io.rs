//! Dataset files: a CSV with header `x[,y],t,u` and a JSON sidecar holding
//! the domain, PDE name, parameters, noise level and seeds.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::dataset::{DomainSpec, ScatteredDataset};
use crate::data::exact::PdeKind;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetMeta {
    pub pde: Option<PdeKind>,
    pub parameters: BTreeMap<String, f64>,
    pub domain: DomainSpec,
    pub noise_level: f64,
    pub seed: u64,
    pub noise_seed: Option<u64>,
    pub samples: usize,
}

/// Sidecar path for a dataset CSV: `data.csv` -> `data.meta.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

fn header(spatial_dim: usize) -> Vec<&'static str> {
    if spatial_dim == 2 {
        vec!["x", "y", "t", "u"]
    } else {
        vec!["x", "t", "u"]
    }
}

pub fn write_csv<T: Scalar, W: std::io::Write>(ds: &ScatteredDataset<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(ds.domain.spatial_dim()))?;
    for (p, v) in ds.points().zip(&ds.values) {
        let row: Vec<String> = p.iter().chain(std::iter::once(v)).map(|c| format!("{}", c.as_f64())).collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `path` and its sidecar.
pub fn save_dataset<T: Scalar>(ds: &ScatteredDataset<T>, path: &Path) -> Result<()> {
    write_csv(ds, fs::File::create(path)?)?;
    let meta = DatasetMeta {
        pde: ds.pde,
        parameters: ds.parameters.clone(),
        domain: ds.domain.clone(),
        noise_level: ds.noise_level,
        seed: ds.seed,
        noise_seed: ds.noise_seed,
        samples: ds.len(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

/// Reads rows from a CSV; the spatial dimension is taken from the header.
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<(usize, Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(reader);
    let head: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let spatial_dim = match head.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", "t", "u"] => 1,
        ["x", "y", "t", "u"] => 2,
        other => {
            return Err(Error::ShapeMismatch(format!("expected header x[,y],t,u, got {other:?}")));
        }
    };
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::ShapeMismatch(format!("row {}: {e}", line + 1)))?;
        if nums.len() != spatial_dim + 2 {
            return Err(Error::ShapeMismatch(format!("row {} has {} fields", line + 1, nums.len())));
        }
        coords.extend_from_slice(&nums[..spatial_dim + 1]);
        values.push(nums[spatial_dim + 1]);
    }
    Ok((spatial_dim, coords, values))
}

/// Loads a dataset; without a sidecar the domain is the bounding box of the
/// samples.
pub fn load_dataset(path: &Path) -> Result<ScatteredDataset<f64>> {
    let (spatial_dim, coords, values) = read_csv(fs::File::open(path)?)?;
    let meta_path = sidecar_path(path);
    let meta: Option<DatasetMeta> = if meta_path.exists() {
        Some(serde_json::from_str(&fs::read_to_string(&meta_path)?)?)
    } else {
        None
    };
    let domain = match &meta {
        Some(m) => m.domain.clone(),
        None => {
            let d = spatial_dim + 1;
            let mut bounds = vec![[f64::INFINITY, f64::NEG_INFINITY]; d];
            for p in coords.chunks_exact(d) {
                for (b, v) in bounds.iter_mut().zip(p) {
                    b[0] = b[0].min(*v);
                    b[1] = b[1].max(*v);
                }
            }
            let time = bounds.pop().expect("time axis");
            DomainSpec::new(bounds, time)?
        }
    };
    if domain.spatial_dim() != spatial_dim {
        return Err(Error::ShapeMismatch("sidecar domain does not match CSV header".into()));
    }
    let mut ds = ScatteredDataset::new(coords, values, domain)?;
    if let Some(m) = meta {
        ds.pde = m.pde;
        ds.parameters = m.parameters;
        ds.noise_level = m.noise_level;
        ds.seed = m.seed;
        ds.noise_seed = m.noise_seed;
    }
    Ok(ds)
}
