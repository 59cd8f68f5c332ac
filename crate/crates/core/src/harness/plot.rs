//! Static SVG chart of inclusion probability against training epoch.

use std::fmt::Write as _;

use crate::harness::trial::CheckpointSnapshot;

const W: f64 = 640.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One polyline per term that is ever selected; unselected terms are omitted.
pub fn evolution_svg(snapshots: &[CheckpointSnapshot], labels: &[String]) -> String {
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let max_epoch = snapshots.iter().map(|s| s.epoch).max().unwrap_or(1).max(1) as f64;
    let px = |e: usize| PAD + (W - 2.0 * PAD) * e as f64 / max_epoch;
    let py = |p: f64| H - PAD - (H - 2.0 * PAD) * p;
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">epoch</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(svg, r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">inclusion probability</text>"#, H / 2.0, H / 2.0);
    let k = snapshots.first().map(|s| s.ensemble.inclusion_probability.len()).unwrap_or(0);
    let mut colour = 0;
    for j in 0..k.min(labels.len()) {
        if snapshots.iter().all(|s| s.ensemble.inclusion_probability[j] == 0.0) {
            continue;
        }
        let c = PALETTE[colour % PALETTE.len()];
        let pts: Vec<String> = snapshots
            .iter()
            .map(|s| format!("{:.1},{:.1}", px(s.epoch), py(s.ensemble.inclusion_probability[j])))
            .collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{c}">{}</text>"#,
            W - PAD + 4.0,
            PAD + 14.0 * colour as f64,
            labels[j]
        );
        colour += 1;
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::EnsembleResult;

    #[test]
    fn draws_only_selected_terms() {
        let snap = |epoch, p: Vec<f64>| CheckpointSnapshot {
            epoch,
            ensemble: EnsembleResult {
                replicates: Vec::new(),
                coefficient_samples: vec![Vec::new(); p.len()],
                inclusion_probability: p,
                subsample_size: 1,
                seed: 0,
            },
        };
        let s = evolution_svg(&[snap(25, vec![0.2, 0.0]), snap(50, vec![1.0, 0.0])], &["u".into(), "u_x".into()]);
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    }
}
