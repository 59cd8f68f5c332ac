//! Human-readable recovered equations, e.g. `u_t + 1.00 u*u_x = 0.49 u_xx`.

use crate::error::{Error, Result};
use crate::regression::SparseModel;

fn term_text(coef: f64, label: &str) -> String {
    if label == "1" {
        format!("{coef:.2}")
    } else {
        format!("{coef:.2} {label}")
    }
}

/// Negative terms move to the left of `=`, positive ones stay on the right.
pub fn format_equation(model: &SparseModel<f64>, labels: &[String]) -> String {
    let mut lhs = String::from("u_t");
    let mut rhs = Vec::new();
    for k in model.support_indices() {
        let c = model.coefficients[k];
        if c < 0.0 {
            lhs.push_str(" + ");
            lhs.push_str(&term_text(-c, &labels[k]));
        } else {
            rhs.push(term_text(c, &labels[k]));
        }
    }
    if rhs.is_empty() {
        format!("{lhs} = 0")
    } else {
        format!("{lhs} = {}", rhs.join(" + "))
    }
}

fn parse_side(side: &str, sign: f64, out: &mut Vec<(String, f64)>) -> Result<()> {
    for piece in side.split(" + ").map(str::trim).filter(|p| !p.is_empty()) {
        let (num, label) = match piece.split_once(' ') {
            Some((n, l)) => (n, l.trim().to_string()),
            None => (piece, "1".to_string()),
        };
        let c: f64 = num.parse().map_err(|_| Error::Config(format!("bad coefficient `{num}` in equation")))?;
        out.push((label, sign * c));
    }
    Ok(())
}

/// Inverse of [`format_equation`]: `(label, coefficient)` pairs.
pub fn parse_equation(text: &str) -> Result<Vec<(String, f64)>> {
    let (lhs, rhs) = text.split_once('=').ok_or_else(|| Error::Config(format!("no `=` in `{text}`")))?;
    let lhs = lhs.trim();
    let rest = lhs.strip_prefix("u_t").ok_or_else(|| Error::Config(format!("equation must start with u_t: `{text}`")))?;
    let mut out = Vec::new();
    parse_side(rest.trim_start().trim_start_matches('+').trim(), -1.0, &mut out)?;
    let rhs = rhs.trim();
    if rhs != "0" {
        parse_side(rhs, 1.0, &mut out)?;
    }
    Ok(out)
}
