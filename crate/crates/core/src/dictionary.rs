//! Candidate-term libraries and assembly of the regression system
//! `u_t ~ Theta xi`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::PdeKind;
use crate::derivative::{DerivativeBundle, DerivativeRequest, Partial};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A monomial in the primitive features, e.g. `u^2*u_xx`. Factors are kept
/// in canonical order so equal terms compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermDescriptor {
    factors: Vec<(Partial, u8)>,
}

impl TermDescriptor {
    pub fn constant() -> Self {
        TermDescriptor { factors: Vec::new() }
    }

    pub fn new(factors: impl IntoIterator<Item = (Partial, u8)>) -> Self {
        let mut merged: Vec<(Partial, u8)> = Vec::new();
        for (p, k) in factors {
            if k == 0 {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, e)) => *e += k,
                None => merged.push((p, k)),
            }
        }
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        TermDescriptor { factors: merged }
    }

    pub fn single(p: Partial) -> Self {
        Self::new([(p, 1)])
    }

    /// Product of two terms.
    pub fn times(&self, other: &TermDescriptor) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).copied())
    }

    pub fn factors(&self) -> &[(Partial, u8)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| *k as u32).sum()
    }

    pub fn primitives(&self) -> impl Iterator<Item = Partial> + '_ {
        self.factors.iter().map(|(p, _)| *p)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Product of primitive values raised to their powers.
    pub fn evaluate<T: Scalar>(&self, bundle: &DerivativeBundle<T>) -> Result<T> {
        let mut acc = T::one();
        for (p, k) in &self.factors {
            acc = acc * bundle.require(*p)?.powi(*k as i32);
        }
        Ok(acc)
    }
}

impl fmt::Display for TermDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for TermDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(TermDescriptor::constant());
        }
        let factors = s
            .split('*')
            .map(|f| {
                let (base, pow) = match f.split_once('^') {
                    Some((b, k)) => (
                        b,
                        k.trim()
                            .parse::<u8>()
                            .map_err(|_| Error::InvalidParameter(format!("bad power in `{f}`")))?,
                    ),
                    None => (f, 1),
                };
                Ok((base.parse::<Partial>()?, pow))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TermDescriptor::new(factors))
    }
}

impl Serialize for TermDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TermDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Evaluates one term on one bundle.
pub fn evaluate_term<T: Scalar>(term: &TermDescriptor, bundle: &DerivativeBundle<T>) -> Result<T> {
    term.evaluate(bundle)
}

fn parse_terms(labels: &[&str]) -> Vec<TermDescriptor> {
    labels.iter().map(|l| l.parse().expect("valid preset label")).collect()
}

/// Library of candidate terms for a benchmark, in column order.
///
/// Burgers: the 5 base features `u, u_x, u_xx, u_tt, u_xt` and their 15
/// pairwise products. Heat and KdV: 12 terms up to `u^2 * u_xxx`.
/// Advection-diffusion: 10 terms including `u_y`, `u_yy`.
pub fn preset_terms(kind: PdeKind) -> Vec<TermDescriptor> {
    match kind {
        PdeKind::Burgers => {
            let base: Vec<TermDescriptor> = [Partial::U, Partial::UX, Partial::UXX, Partial::UTT, Partial::UXT]
                .into_iter()
                .map(TermDescriptor::single)
                .collect();
            let mut terms = base.clone();
            for i in 0..base.len() {
                for j in i..base.len() {
                    terms.push(base[i].times(&base[j]));
                }
            }
            terms
        }
        PdeKind::Heat | PdeKind::Kdv => parse_terms(&[
            "1", "u", "u_x", "u_xx", "u_xxx", "u^2", "u*u_x", "u*u_xx", "u*u_xxx", "u^2*u_x", "u^2*u_xx",
            "u^2*u_xxx",
        ]),
        PdeKind::AdvDiff => parse_terms(&["1", "u", "u^2", "u^3", "u_x", "u_y", "u_xx", "u_yy", "u*u_x", "u*u_y"]),
    }
}

/// Partials that must be extracted for a library: every primitive plus the
/// target `u_t`.
pub fn request_for(terms: &[TermDescriptor]) -> DerivativeRequest {
    DerivativeRequest::new(terms.iter().flat_map(|t| t.primitives().collect::<Vec<_>>()).chain([Partial::UT]))
}

/// Assembled regression system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dictionary<T> {
    pub terms: Vec<TermDescriptor>,
    pub theta: Matrix<T>,
    pub target: Vec<T>,
}

impl<T: Scalar> Dictionary<T> {
    pub fn point_count(&self) -> usize {
        self.target.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.terms.iter().map(|t| t.label()).collect()
    }

    /// Debug dump: one column per term plus the `u_t` target.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = self.labels();
        header.push("u_t".into());
        w.write_record(&header)?;
        for r in 0..self.point_count() {
            let row: Vec<String> = self
                .theta
                .row(r)
                .iter()
                .chain(std::iter::once(&self.target[r]))
                .map(|v| format!("{}", v.as_f64()))
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds `theta[n][k] = terms[k](bundles[n])` and `target[n] = u_t`.
/// Any non-finite entry is an error naming the point and the term.
pub fn assemble<T: Scalar>(bundles: &[DerivativeBundle<T>], terms: &[TermDescriptor]) -> Result<Dictionary<T>> {
    if bundles.is_empty() {
        return Err(Error::InvalidParameter("cannot assemble a dictionary from zero points".into()));
    }
    if terms.is_empty() {
        return Err(Error::InvalidParameter("the term library is empty".into()));
    }
    let k = terms.len();
    let mut theta = Matrix::zeros(bundles.len(), k);
    let mut target = Vec::with_capacity(bundles.len());
    for (n, b) in bundles.iter().enumerate() {
        let ut = b.require(Partial::UT).map_err(|e| Error::at_point(n, e))?;
        if !ut.is_finite() {
            return Err(Error::NonFinite { point: n, term: "u_t".into() });
        }
        target.push(ut);
        for (j, term) in terms.iter().enumerate() {
            let v = term.evaluate(b).map_err(|e| Error::at_point(n, e))?;
            if !v.is_finite() {
                return Err(Error::NonFinite { point: n, term: term.label() });
            }
            theta.set(n, j, v);
        }
    }
    Ok(Dictionary { terms: terms.to_vec(), theta, target })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle(entries: &[(Partial, f64)]) -> DerivativeBundle<f64> {
        DerivativeBundle::from_entries(entries.iter().copied())
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(preset_terms(PdeKind::Burgers).len(), 20);
        assert_eq!(preset_terms(PdeKind::Heat).len(), 12);
        assert_eq!(preset_terms(PdeKind::Kdv).len(), 12);
        assert_eq!(preset_terms(PdeKind::AdvDiff).len(), 10);
    }

    #[test]
    fn burgers_library_is_degree_two_without_constant() {
        let terms = preset_terms(PdeKind::Burgers);
        assert!(terms.iter().all(|t| (1..=2).contains(&t.degree())));
        let mut uniq = terms.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), 20);
        let labels: Vec<String> = terms.iter().map(|t| t.label()).collect();
        assert_eq!(&labels[..6], &["u", "u_x", "u_xx", "u_tt", "u_xt", "u^2"]);
        assert!(labels.contains(&"u*u_x".to_string()));
        assert!(labels.contains(&"u_tt*u_xt".to_string()));
    }

    #[test]
    fn heat_library_order() {
        let labels: Vec<String> = preset_terms(PdeKind::Heat).iter().map(|t| t.label()).collect();
        assert_eq!(
            labels,
            [
                "1", "u", "u_x", "u_xx", "u_xxx", "u^2", "u*u_x", "u*u_xx", "u*u_xxx", "u^2*u_x", "u^2*u_xx",
                "u^2*u_xxx"
            ]
        );
    }

    #[test]
    fn advdiff_library_has_y_terms() {
        let terms = preset_terms(PdeKind::AdvDiff);
        assert!(terms.contains(&TermDescriptor::single(Partial::UY)));
        assert!(terms.contains(&TermDescriptor::single(Partial::UYY)));
    }

    #[test]
    fn requests_cover_library_primitives() {
        for kind in PdeKind::ALL {
            let terms = preset_terms(kind);
            let req = request_for(&terms);
            assert!(req.contains(Partial::UT));
            for t in &terms {
                assert!(t.primitives().all(|p| req.contains(p)), "{kind}: {t}");
            }
            req.check_supported(kind.spatial_dim()).unwrap();
        }
    }

    #[test]
    fn term_evaluation() {
        let b = bundle(&[(Partial::U, 2.0), (Partial::UX, 3.0)]);
        assert_eq!(evaluate_term(&"u*u_x".parse().unwrap(), &b).unwrap(), 6.0);
        assert_eq!(evaluate_term(&TermDescriptor::constant(), &b).unwrap(), 1.0);
        let c = bundle(&[(Partial::U, 0.5), (Partial::UXXX, -4.0)]);
        assert_eq!(evaluate_term(&"u^2*u_xxx".parse().unwrap(), &c).unwrap(), -1.0);
        assert!(matches!(
            evaluate_term(&"u_xx".parse().unwrap(), &b),
            Err(Error::MissingPrimitive(_))
        ));
    }

    #[test]
    fn labels_parse_back() {
        for kind in PdeKind::ALL {
            for t in preset_terms(kind) {
                assert_eq!(t.label().parse::<TermDescriptor>().unwrap(), t);
            }
        }
        assert_eq!("u_x*u".parse::<TermDescriptor>().unwrap().label(), "u*u_x");
        assert_eq!("u*u".parse::<TermDescriptor>().unwrap().label(), "u^2");
    }

    #[test]
    fn single_constant_column() {
        let b = bundle(&[(Partial::U, 1.0), (Partial::UT, 0.25)]);
        let d = assemble(&[b], &[TermDescriptor::constant()]).unwrap();
        assert_eq!(d.theta.as_slice(), &[1.0]);
        assert_eq!(d.target, vec![0.25]);
    }

    #[test]
    fn assembly_errors() {
        let good = bundle(&[(Partial::U, 1.0), (Partial::UT, 0.25)]);
        let no_ut = bundle(&[(Partial::U, 1.0)]);
        let inf = bundle(&[(Partial::U, f64::INFINITY), (Partial::UT, 0.25)]);
        let u = [TermDescriptor::single(Partial::U)];
        assert!(assemble::<f64>(&[], &u).is_err());
        assert!(matches!(assemble(&[good.clone(), no_ut], &u), Err(Error::AtPoint { index: 1, .. })));
        match assemble(&[good, inf], &u) {
            Err(Error::NonFinite { point, term }) => {
                assert_eq!(point, 1);
                assert_eq!(term, "u");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_dump_has_target_column() {
        let b = bundle(&[(Partial::U, 2.0), (Partial::UX, 3.0), (Partial::UT, 1.0)]);
        let d = assemble(&[b], &preset_terms(PdeKind::AdvDiff)[..2]).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,u,u_t\n1,2,1\n");
    }
}
