//! Partial-derivative descriptors, requests and per-point bundles.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, JetShape};
use crate::scalar::Scalar;

/// A partial derivative `d^(x+y+t) u / dx^x dy^y dt^t`; all zero is `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partial {
    pub x: u8,
    pub y: u8,
    pub t: u8,
}

impl Partial {
    pub const U: Partial = Partial::new(0, 0, 0);
    pub const UX: Partial = Partial::new(1, 0, 0);
    pub const UXX: Partial = Partial::new(2, 0, 0);
    pub const UXXX: Partial = Partial::new(3, 0, 0);
    pub const UY: Partial = Partial::new(0, 1, 0);
    pub const UYY: Partial = Partial::new(0, 2, 0);
    pub const UT: Partial = Partial::new(0, 0, 1);
    pub const UTT: Partial = Partial::new(0, 0, 2);
    pub const UXT: Partial = Partial::new(1, 0, 1);

    pub const fn new(x: u8, y: u8, t: u8) -> Self {
        Partial { x, y, t }
    }

    pub fn order(&self) -> u8 {
        self.x + self.y + self.t
    }

    /// Checks the orders the derivative engine supports: up to 3 per
    /// spatial axis, 2 in time, and the mixed `u_xt`.
    pub fn check_supported(&self, spatial_dim: usize) -> Result<()> {
        let axes = [self.x, self.y, self.t].iter().filter(|o| **o > 0).count();
        let ok = self.x <= 3
            && self.y <= 3
            && self.t <= 2
            && (axes <= 1 || *self == Partial::UXT)
            && (self.y == 0 || spatial_dim >= 2);
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedOrder(format!("{self} for spatial dimension {spatial_dim}")))
        }
    }

    fn sort_key(&self) -> (u8, u8) {
        match (self.x, self.y, self.t) {
            (0, 0, 0) => (0, 0),
            (x, 0, 0) => (1, x),
            (0, y, 0) => (2, y),
            (0, 0, t) => (3, t),
            _ => (4, self.order()),
        }
    }
}

impl Ord for Partial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| (self.x, self.y, self.t).cmp(&(other.x, other.y, other.t)))
    }
}

impl PartialOrd for Partial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Partial::U {
            return f.write_str("u");
        }
        f.write_str("u_")?;
        for (n, ch) in [(self.x, 'x'), (self.y, 'y'), (self.t, 't')] {
            for _ in 0..n {
                write!(f, "{ch}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "u" {
            return Ok(Partial::U);
        }
        let rest = s
            .strip_prefix("u_")
            .ok_or_else(|| Error::UnsupportedOrder(format!("cannot parse `{s}`")))?;
        let mut p = Partial::U;
        for ch in rest.chars() {
            match ch {
                'x' => p.x += 1,
                'y' => p.y += 1,
                't' => p.t += 1,
                _ => return Err(Error::UnsupportedOrder(format!("cannot parse `{s}`"))),
            }
        }
        Ok(p)
    }
}

impl Serialize for Partial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Set of partials to extract at each point. The value `u` is always
/// included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeRequest {
    partials: BTreeSet<Partial>,
}

impl DerivativeRequest {
    pub fn new(partials: impl IntoIterator<Item = Partial>) -> Self {
        let mut set: BTreeSet<Partial> = partials.into_iter().collect();
        set.insert(Partial::U);
        DerivativeRequest { partials: set }
    }

    pub fn partials(&self) -> impl Iterator<Item = Partial> + '_ {
        self.partials.iter().copied()
    }

    pub fn contains(&self, p: Partial) -> bool {
        self.partials.contains(&p)
    }

    pub fn check_supported(&self, spatial_dim: usize) -> Result<()> {
        self.partials.iter().try_for_each(|p| p.check_supported(spatial_dim))
    }

    /// Smallest jet box holding every requested partial.
    pub fn jet_shape(&self) -> JetShape {
        self.partials
            .iter()
            .fold(JetShape::SCALAR, |s, p| s.union(JetShape::new(p.x, p.y, p.t)))
    }
}

/// Value and requested partial derivatives of a field at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeBundle<T> {
    entries: Vec<(Partial, T)>,
}

impl<T: Scalar> DerivativeBundle<T> {
    pub fn from_entries(entries: impl IntoIterator<Item = (Partial, T)>) -> Self {
        let mut entries: Vec<(Partial, T)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        DerivativeBundle { entries }
    }

    /// Reads every requested partial off a jet.
    pub fn from_jet(jet: &Jet<T>, request: &DerivativeRequest) -> Result<Self> {
        let entries = request
            .partials()
            .map(|p| {
                jet.derivative(p.x as usize, p.y as usize, p.t as usize)
                    .map(|v| (p, v))
                    .ok_or_else(|| Error::UnsupportedOrder(format!("{p} exceeds jet shape {:?}", jet.shape())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DerivativeBundle { entries })
    }

    pub fn get(&self, p: Partial) -> Option<T> {
        self.entries
            .binary_search_by(|(q, _)| q.cmp(&p))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn require(&self, p: Partial) -> Result<T> {
        self.get(p).ok_or_else(|| Error::MissingPrimitive(p.to_string()))
    }

    pub fn value(&self) -> T {
        self.get(Partial::U).unwrap_or_else(T::nan)
    }

    pub fn u_t(&self) -> Option<T> {
        self.get(Partial::UT)
    }

    pub fn orders_present(&self) -> impl Iterator<Item = Partial> + '_ {
        self.entries.iter().map(|(p, _)| *p)
    }

    pub fn entries(&self) -> &[(Partial, T)] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_finite())
    }
}
