//! Grid-level reproducibility and report consistency.

use pde_discovery::data::PdeKind;
use pde_discovery::harness::{
    emit_report, parse_equation, run_grid, CellResult, ExperimentConfig, GridResult, PresetOverrides, ReportFormat,
    TrialOutcome, WORKERS_ENV,
};

fn tiny(sizes: Vec<usize>, noises: Vec<f64>, trials: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(PdeKind::Burgers, sizes, noises);
    cfg.trials_per_cell = trials;
    cfg.base_seed = 17;
    cfg.overrides = Some(PresetOverrides {
        hidden: Some(vec![8]),
        epochs: Some(5),
        replicates: Some(6),
        ..Default::default()
    });
    cfg
}

/// Everything but wall-clock time.
fn fingerprint(t: &TrialOutcome) -> String {
    serde_json::to_string(&(t.trial, t.seed, t.success, &t.model, &t.metrics, &t.inclusion_probability, &t.diagnostic))
        .unwrap()
}

fn cell<'a>(grid: &'a GridResult, n: usize, noise: f64) -> &'a CellResult {
    grid.cells.iter().find(|c| c.n == n && c.noise == noise).unwrap()
}

#[test]
fn grid_is_independent_of_worker_count() {
    let cfg = tiny(vec![40, 60], vec![0.0, 0.1], 2);
    std::env::set_var(WORKERS_ENV, "1");
    let a = run_grid(&cfg).unwrap();
    std::env::set_var(WORKERS_ENV, "3");
    let b = run_grid(&cfg).unwrap();
    std::env::remove_var(WORKERS_ENV);
    assert_eq!(a.cells.len(), 4);
    for (x, y) in a.cells.iter().zip(&b.cells) {
        assert_eq!((x.n, x.noise, x.successes), (y.n, y.noise, y.successes));
        let fx: Vec<String> = x.trial_results.iter().map(fingerprint).collect();
        let fy: Vec<String> = y.trial_results.iter().map(fingerprint).collect();
        assert_eq!(fx, fy);
    }
}

#[test]
fn cells_do_not_share_seeds() {
    let full = run_grid(&tiny(vec![40, 60], vec![0.1], 3)).unwrap();
    let alone = run_grid(&tiny(vec![60], vec![0.1], 2)).unwrap();
    let a = cell(&full, 60, 0.1);
    let b = cell(&alone, 60, 0.1);
    let fa: Vec<String> = a.trial_results.iter().take(2).map(fingerprint).collect();
    let fb: Vec<String> = b.trial_results.iter().map(fingerprint).collect();
    assert_eq!(fa, fb);
    let seeds: std::collections::BTreeSet<u64> =
        full.cells.iter().flat_map(|c| c.trial_results.iter().map(|t| t.seed)).collect();
    assert_eq!(seeds.len(), 6);
}

#[test]
fn reports_agree_with_the_grid() {
    let grid = run_grid(&tiny(vec![40], vec![0.0, 0.5], 2)).unwrap();
    let csv = emit_report(&grid, ReportFormat::Csv).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "pde,n,noise,successes,trials,rate,mean_seconds");
    assert_eq!(rows.len(), 1 + grid.cells.len());
    for (row, c) in rows[1..].iter().zip(&grid.cells) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[1].parse::<usize>().unwrap(), c.n);
        assert_eq!(fields[3].parse::<usize>().unwrap(), c.successes);
        let rate: f64 = fields[5].parse().unwrap();
        assert!((rate - c.success_rate()).abs() < 1e-4);
    }

    let json = emit_report(&grid, ReportFormat::Json).unwrap();
    let back: GridResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back.cells.len(), grid.cells.len());
    assert_eq!(back.terms, grid.terms);

    let md = emit_report(&grid, ReportFormat::Markdown).unwrap();
    assert!(md.contains("## burgers success rate (%)"));
    for line in md.lines().filter(|l| l.starts_with("- N=")) {
        let eq = line.split('`').nth(1).unwrap();
        for (label, _) in parse_equation(eq).unwrap() {
            assert!(grid.terms.contains(&label), "unknown term {label}");
        }
    }
}

#[test]
fn config_files_round_trip() {
    let cfg = tiny(vec![40], vec![0.1], 2);
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    let typo = text.replace("trials_per_cell", "trails_per_cell");
    let err = ExperimentConfig::from_json(&typo).unwrap_err().to_string();
    assert!(err.contains("trails_per_cell"), "{err}");
}
