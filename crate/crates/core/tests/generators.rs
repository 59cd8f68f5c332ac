//! Closed-form generators against independently derived reference values.

use std::f64::consts::PI;

use pde_discovery::data::{
    advdiff_exact, heat_series, heat_sine_coefficients, kdv_two_soliton, AdvDiffParams, ExactSolution, KdvParams,
    PdeKind,
};

/// Sine coefficients of `x^2 sin x` on `[0, pi]` by integration by parts.
fn heat_coefficient(q: usize) -> f64 {
    if q == 1 {
        PI * PI / 3.0 - 0.5
    } else {
        let q = q as f64;
        let sign = if (q as usize) % 2 == 0 { -1.0 } else { 1.0 };
        8.0 * q * sign / (q * q - 1.0).powi(2)
    }
}

#[test]
fn heat_coefficients_match_closed_form() {
    let got = heat_sine_coefficients(32, 2048).unwrap();
    for (i, d) in got.iter().enumerate() {
        let want = heat_coefficient(i + 1);
        assert!((d - want).abs() < 1e-5, "mode {}: {d} vs {want}", i + 1);
    }
}

#[test]
fn thirty_two_modes_capture_the_solution() {
    let long: Vec<f64> = (1..=2000).map(heat_coefficient).collect();
    let sol = ExactSolution::heat(1.0, 32).unwrap();
    for i in 1..50 {
        let x = PI * i as f64 / 50.0;
        for t in [0.01, 0.1, 1.0] {
            let reference: f64 = heat_series(x, t, 1.0, &long);
            let u = sol.eval::<f64, f64>(&[x, t]);
            assert!((u - reference).abs() < 1e-5, "x={x} t={t}: {u} vs {reference}");
        }
    }
}

#[test]
fn kdv_mass_is_the_sum_of_soliton_masses() {
    let p = KdvParams::default();
    let expected = 2.0 * (p.c1.sqrt() + p.c2.sqrt());
    for t in [0.0, 0.5, 1.0] {
        let n = 40_000;
        let (lo, hi) = (-60.0, 60.0);
        let h = (hi - lo) / n as f64;
        let mass: f64 = (0..n).map(|i| kdv_two_soliton::<f64, f64>(lo + (i as f64 + 0.5) * h, t, &p)).sum::<f64>() * h;
        assert!((mass - expected).abs() < 1e-8, "t={t}: {mass} vs {expected}");
    }
}

#[test]
fn advdiff_peak_follows_the_flow() {
    let p = AdvDiffParams::default();
    for t in [0.0, 0.7, 2.0] {
        let cx = p.center[0] + p.velocity[0] * t;
        let cy = p.center[1] + p.velocity[1] * t;
        let peak = p.amplitude / (4.0 * PI * p.diffusivity * (t + p.t0));
        let u: f64 = advdiff_exact(cx, cy, t, &p);
        assert!((u - peak).abs() < 1e-14 * peak.max(1.0), "t={t}: {u} vs {peak}");
        let off: f64 = advdiff_exact(cx + 0.3, cy, t, &p);
        assert!(off < u);
    }
}

#[test]
fn default_solutions_match_their_kind() {
    for pde in PdeKind::ALL {
        assert_eq!(ExactSolution::default_for(pde).kind(), pde);
    }
}
