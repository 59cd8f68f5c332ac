//! Randomised invariants of the regression, dictionary, metrics and data
//! layers.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use pde_discovery::data::{
    exact_bundles, inject_noise, sample_scattered, DomainSpec, ExactSolution, PdeKind, PdeTruth,
};
use pde_discovery::derivative::Partial;
use pde_discovery::dictionary::{assemble, preset_terms, request_for};
use pde_discovery::harness::{format_equation, parse_equation};
use pde_discovery::linalg::Matrix;
use pde_discovery::metrics::{e_field, e_nn, e_pde, judge_success};
use pde_discovery::regression::{
    aggregate, best_subset, ensemble_discover, ridge_solve, stlsq, BestSubsetConfig, SolverKind, SolverSpec,
    SparseModel, StlsqConfig,
};
use pde_discovery::surrogate::{batch_bundles, input_derivatives, InputScaling, SurrogateParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn system(seed: u64, n: usize, k: usize, noise: f64) -> (Matrix<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = Matrix::zeros(n, k);
    for r in 0..n {
        for c in 0..k {
            theta.set(r, c, StandardNormal.sample(&mut rng));
        }
    }
    let mut xi = vec![0.0; k];
    for _ in 0..rng.random_range(1..=3) {
        xi[rng.random_range(0..k)] = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    let mut y = theta.mul_vec(&xi);
    for v in &mut y {
        let e: f64 = StandardNormal.sample(&mut rng);
        *v += noise * e;
    }
    (theta, y)
}

fn permutation(seed: u64, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ridge_matches_pseudoinverse(seed in any::<u64>(), alpha in prop_oneof![Just(0.0), 1e-4..1.0f64]) {
        let (theta, y) = system(seed, 40, 6, 0.1);
        let got = ridge_solve(&theta, &y, alpha, &[true; 6]).unwrap();
        let a = DMatrix::from_fn(40, 6, |r, c| theta.get(r, c));
        let aug = if alpha == 0.0 {
            a.clone()
        } else {
            let mut m = DMatrix::zeros(46, 6);
            m.view_mut((0, 0), (40, 6)).copy_from(&a);
            m.view_mut((40, 0), (6, 6)).copy_from(&(DMatrix::identity(6, 6) * alpha.sqrt()));
            m
        };
        let mut rhs = DVector::zeros(aug.nrows());
        rhs.rows_mut(0, 40).copy_from(&DVector::from_column_slice(&y));
        let want = aug.pseudo_inverse(1e-14).unwrap() * rhs;
        prop_assert!(max_rel(&got, want.as_slice()) < 1e-10);
    }

    #[test]
    fn best_subset_is_permutation_equivariant(seed in any::<u64>()) {
        let (theta, y) = system(seed, 50, 7, 0.2);
        let perm = permutation(seed ^ 1, 7);
        let permuted = theta.select_cols(&perm);
        let cfg = BestSubsetConfig::new(0.01);
        let base = best_subset(&theta, &y, &cfg).unwrap();
        let moved = best_subset(&permuted, &y, &cfg).unwrap();
        for (new, &old) in perm.iter().enumerate() {
            prop_assert_eq!(moved.support[new], base.support[old]);
            prop_assert!((moved.coefficients[new] - base.coefficients[old]).abs() < 1e-9);
        }
    }

    #[test]
    fn stlsq_is_row_permutation_invariant(seed in any::<u64>()) {
        let (theta, y) = system(seed, 60, 8, 0.1);
        let perm = permutation(seed ^ 2, 60);
        let y_perm: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
        let cfg = StlsqConfig::new(0.3, 0.02);
        let a = stlsq(&theta, &y, &cfg).unwrap().model;
        let b = stlsq(&theta.select_rows(&perm), &y_perm, &cfg).unwrap().model;
        prop_assert_eq!(&a.support, &b.support);
        prop_assert!(max_rel(&a.coefficients, &b.coefficients) < 1e-10);
    }

    #[test]
    fn ensemble_is_deterministic(seed in any::<u64>(), replicates in 1usize..12) {
        let (theta, y) = system(seed, 40, 6, 0.3);
        let solver = SolverSpec::Stlsq(StlsqConfig::new(0.2, 0.05));
        let a = ensemble_discover(&theta, &y, &solver, replicates, 30, seed).unwrap();
        let b = ensemble_discover(&theta, &y, &solver, replicates, 30, seed).unwrap();
        prop_assert_eq!(&a, &b);
        for p in &a.inclusion_probability {
            prop_assert!((0.0..=1.0).contains(p));
        }
    }

    #[test]
    fn single_full_replicate_is_the_base_solver(seed in any::<u64>()) {
        let (theta, y) = system(seed, 40, 6, 0.2);
        let solver = SolverSpec::BestSubset(BestSubsetConfig::new(0.01));
        let ens = ensemble_discover(&theta, &y, &solver, 1, 40, seed).unwrap();
        let model = aggregate(&ens, 0.6).unwrap();
        let base = solver.solve(&theta, &y).unwrap();
        prop_assert_eq!(&model.support, &base.support);
        prop_assert!(max_rel(&model.coefficients, &base.coefficients) < 1e-12);
    }

    #[test]
    fn equation_text_round_trips(coefs in prop::collection::vec(prop_oneof![Just(0.0), -5.0..5.0f64], 5)) {
        let labels: Vec<String> = ["1", "u", "u_x", "u*u_x", "u_xx"].iter().map(|s| s.to_string()).collect();
        let model = SparseModel::from_coefficients(coefs.clone(), SolverKind::Stlsq, BTreeMap::new());
        let parsed = parse_equation(&format_equation(&model, &labels)).unwrap();
        prop_assert_eq!(parsed.len(), model.support_size());
        for (label, c) in parsed {
            let k = labels.iter().position(|l| *l == label).unwrap();
            prop_assert!((c - coefs[k]).abs() <= 0.005 + 1e-12);
        }
    }

    #[test]
    fn dictionary_rows_follow_point_order(seed in any::<u64>()) {
        let sol = ExactSolution::default_for(PdeKind::Kdv);
        let ds = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &DomainSpec::default_for(PdeKind::Kdv), 30, seed).unwrap();
        let terms = preset_terms(PdeKind::Kdv);
        let bundles = exact_bundles(&sol, &ds.coords, &request_for(&terms)).unwrap();
        let perm = permutation(seed, 30);
        let shuffled: Vec<_> = perm.iter().map(|&i| bundles[i].clone()).collect();
        let a = assemble(&bundles, &terms).unwrap();
        let b = assemble(&shuffled, &terms).unwrap();
        prop_assert_eq!(b.theta, a.theta.select_rows(&perm));
        let target: Vec<f64> = perm.iter().map(|&i| a.target[i]).collect();
        prop_assert_eq!(b.target, target);
    }

    #[test]
    fn metrics_are_nonnegative_and_order_free(seed in any::<u64>()) {
        let (theta, y) = system(seed, 30, 5, 0.5);
        let model = stlsq(&theta, &y, &StlsqConfig::new(0.1, 0.0)).unwrap().model;
        let perm = permutation(seed, 30);
        let y_perm: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
        let a = e_pde(&y, &model, &theta).unwrap();
        let b = e_pde(&y_perm, &model, &theta.select_rows(&perm)).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        let exact = model.predict(&theta).unwrap();
        prop_assert_eq!(e_pde(&exact, &model, &theta).unwrap(), 0.0);

        let dom = DomainSpec::default_for(PdeKind::Heat);
        let sol = ExactSolution::default_for(PdeKind::Heat);
        let ds = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &dom, 30, seed).unwrap();
        let net = SurrogateParams::init(&[2, 5, 1], InputScaling::from_domain(&dom), seed).unwrap();
        let shuffled = ds.select(&perm);
        let (f1, f2) = (e_field(&ds, &net).unwrap(), e_field(&shuffled, &net).unwrap());
        prop_assert!(f1 >= 0.0 && (f1 - f2).abs() <= 1e-12 * f1.max(1.0));
        prop_assert!((e_nn(&ds, &net).unwrap() - e_nn(&shuffled, &net).unwrap()).abs() <= 1e-12 * f1.max(1.0));
    }

    #[test]
    fn success_ignores_library_order(seed in any::<u64>(), flip in any::<bool>()) {
        let terms = preset_terms(PdeKind::Burgers);
        let truth = PdeTruth::for_solution(&ExactSolution::default_for(PdeKind::Burgers));
        let mut coefs = truth.coefficient_vector(&terms).unwrap();
        if flip {
            let k = coefs.iter().position(|c| *c != 0.0).unwrap();
            coefs[k] = -coefs[k];
        }
        let perm = permutation(seed, terms.len());
        let model = SparseModel::from_coefficients(coefs.clone(), SolverKind::Stlsq, BTreeMap::new());
        let moved = SparseModel::from_coefficients(
            perm.iter().map(|&i| coefs[i]).collect(),
            SolverKind::Stlsq,
            BTreeMap::new(),
        );
        let moved_terms: Vec<_> = perm.iter().map(|&i| terms[i].clone()).collect();
        let a = judge_success(&model, &terms, &truth);
        prop_assert_eq!(a, !flip);
        prop_assert_eq!(judge_success(&moved, &moved_terms, &truth), a);
    }

    #[test]
    fn samples_stay_inside_the_domain(seed in any::<u64>(), n in 1usize..200) {
        for pde in [PdeKind::Burgers, PdeKind::AdvDiff] {
            let dom = DomainSpec::default_for(pde);
            let sol = ExactSolution::default_for(pde);
            let ds = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &dom, n, seed).unwrap();
            prop_assert_eq!(ds.len(), n);
            prop_assert!(ds.points().all(|p| dom.contains(p)));
            let again = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &dom, n, seed).unwrap();
            prop_assert_eq!(&ds, &again);
            let noisy = inject_noise(&ds, 0.1, seed).unwrap();
            prop_assert!(inject_noise(&noisy, 0.1, seed).is_err());
            prop_assert_eq!(&noisy.coords, &ds.coords);
        }
    }

    #[test]
    fn batched_derivatives_match_pointwise(seed in any::<u64>(), n in 1usize..20) {
        let dom = DomainSpec::default_for(PdeKind::AdvDiff);
        let net = SurrogateParams::init(&[3, 8, 8, 1], InputScaling::from_domain(&dom), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<f64> = (0..n)
            .flat_map(|_| dom.bounds().into_iter().map(|[lo, hi]| rng.random_range(lo..hi)).collect::<Vec<_>>())
            .collect();
        let request = request_for(&preset_terms(PdeKind::AdvDiff));
        let batch = batch_bundles(&net, &points, &request).unwrap();
        for (b, p) in batch.iter().zip(points.chunks(3)) {
            prop_assert_eq!(b, &input_derivatives(&net, p, &request).unwrap());
            prop_assert!(b.get(Partial::UYY).is_some());
        }
    }
}

#[test]
fn noise_has_the_requested_spread() {
    let dom = DomainSpec::default_for(PdeKind::Burgers);
    let sol = ExactSolution::default_for(PdeKind::Burgers);
    let ds = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &dom, 20_000, 3).unwrap();
    let noisy = inject_noise(&ds, 0.25, 4).unwrap();
    let diff: Vec<f64> = noisy.values.iter().zip(&ds.values).map(|(a, b)| a - b).collect();
    let ratio = pde_discovery::data::sample_std(&diff) / pde_discovery::data::sample_std(&ds.values);
    assert!((ratio - 0.25).abs() < 0.01, "ratio {ratio}");
}
