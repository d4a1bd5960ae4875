use lsfem::assembly::{assemble_ls, LinearSystem};
use lsfem::bench::{discretize, get_problem, Overrides};
use lsfem::solver::{
    cg_solve, dense_extremes, dense_oracle_solve, estimate_extremes, CgOptions, Preconditioner, SolverError,
    SpectralMethod, SpectralOptions, SparseSym,
};
use lsfem::{BcMode, Mesh};
use proptest::prelude::*;

fn system(name: &str, eps: f64, n: usize, k: usize, mode: BcMode) -> LinearSystem {
    let p = get_problem(name, eps, &Overrides::default()).unwrap();
    let disc = discretize(&p, Mesh::generate_structured(n, 0.15).unwrap(), k).unwrap();
    assemble_ls(&p, &disc, mode).unwrap()
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

#[test]
fn cg_matches_dense_solve() {
    for (name, eps, mode) in [
        ("smooth", 1e-3, BcMode::Weak),
        ("boundary-layer", 1e-2, BcMode::AltWeak),
        ("smooth", 1.0, BcMode::Strong),
    ] {
        let sys = system(name, eps, 6, 1, mode);
        assert!(sys.layout.total() <= 2000);
        let want = dense_oracle_solve(&sys.matrix.to_dense(), &sys.rhs).unwrap();
        for precond in [Preconditioner::None, Preconditioner::Jacobi, Preconditioner::IncompleteCholesky] {
            let opts = CgOptions {
                tol: 1e-13,
                max_iter: Some(50_000),
                precond,
            };
            let got = cg_solve(&sys.matrix, &sys.rhs, &opts).unwrap();
            assert!(rel_diff(&got.x, &want) <= 1e-9, "{name} {mode:?} {precond:?}");
        }
    }
}

#[test]
fn cg_energy_never_increases() {
    let sys = system("smooth", 1e-3, 8, 0, BcMode::Weak);
    let sol = cg_solve(&sys.matrix, &sys.rhs, &CgOptions::default()).unwrap();
    assert!(sol.iterations > 5);
    assert_eq!(sol.energy_history.len(), sol.iterations + 1);
    let scale = sol.energy_history.last().unwrap().abs();
    for w in sol.energy_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-12 * scale, "{} -> {}", w[0], w[1]);
    }
    assert!(sol.residual <= 1e-10 * 10.0);
}

#[test]
fn iteration_cap_is_reported() {
    let sys = system("smooth", 1e-3, 8, 0, BcMode::Weak);
    let opts = CgOptions {
        max_iter: Some(3),
        ..Default::default()
    };
    match cg_solve(&sys.matrix, &sys.rhs, &opts) {
        Err(SolverError::NotConverged { iterations, residual }) => {
            assert_eq!(iterations, 3);
            assert!(residual > 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn dense_and_iterative_spectra_agree() {
    // k = 0 on a 13 x 13 grid lands just under the dense limit.
    let sys = system("smooth", 1e-3, 13, 0, BcMode::Weak);
    let n = sys.layout.total();
    assert!((1500..=2000).contains(&n), "{n}");
    let dense = estimate_extremes(&sys.matrix, &SpectralOptions::default()).unwrap();
    assert_eq!(dense.method, SpectralMethod::Dense);
    let it = estimate_extremes(
        &sys.matrix,
        &SpectralOptions {
            method: Some(SpectralMethod::Iterative),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(it.method, SpectralMethod::Iterative);
    for (a, b) in [
        (it.lambda_min, dense.lambda_min),
        (it.lambda_max, dense.lambda_max),
        (it.kappa, dense.kappa),
    ] {
        assert!((a / b - 1.0).abs() <= 0.02, "{a} vs {b}");
    }
}

#[test]
fn weak_systems_are_positive_definite() {
    for mode in [BcMode::Weak, BcMode::AltWeak, BcMode::Strong] {
        for eps in [1.0, 1e-3, 1e-9] {
            let sys = system("smooth", eps, 4, 1, mode);
            let est = estimate_extremes(&sys.matrix, &SpectralOptions::default()).unwrap();
            assert!(est.lambda_min > 0.0, "{mode:?} eps={eps}");
            assert!(est.kappa.is_finite() && est.kappa >= 1.0);
        }
    }
}

#[test]
fn indefinite_matrix_is_rejected() {
    let a = SparseSym::from_triplets(2, vec![(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
    let r = cg_solve(&a, &[0.0, 1.0], &CgOptions { precond: Preconditioner::None, ..Default::default() });
    assert!(matches!(r, Err(SolverError::NotPositiveDefinite { .. })));
}

fn random_spd(n: usize, seed: u64) -> nalgebra::DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let b = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    &b * b.transpose() + nalgebra::DMatrix::identity(n, n) * 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cg_solves_random_spd_systems(n in 1usize..30, seed in 0u64..1000) {
        let a = random_spd(n, seed);
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 1.0).collect();
        let want = dense_oracle_solve(&a, &b).unwrap();
        let sparse = SparseSym::from_dense(&a).unwrap();
        for precond in [Preconditioner::None, Preconditioner::Jacobi, Preconditioner::IncompleteCholesky, Preconditioner::Cholesky] {
            let got = cg_solve(&sparse, &b, &CgOptions { tol: 1e-13, max_iter: Some(1000), precond }).unwrap();
            prop_assert!(rel_diff(&got.x, &want) <= 1e-8);
        }
    }

    #[test]
    fn spectral_estimates_bracket_rayleigh_quotients(n in 2usize..40, seed in 0u64..1000) {
        let a = random_spd(n, seed);
        let est = dense_extremes(&a).unwrap();
        let x = nalgebra::DVector::from_fn(n, |i, _| ((i + 1) as f64).sqrt());
        let rq = x.dot(&(&a * &x)) / x.dot(&x);
        prop_assert!(est.lambda_min <= rq * (1.0 + 1e-12));
        prop_assert!(rq <= est.lambda_max * (1.0 + 1e-12));
        let it = estimate_extremes(
            &SparseSym::from_dense(&a).unwrap(),
            &SpectralOptions { method: Some(SpectralMethod::Iterative), tol: 1e-8, ..Default::default() },
        ).unwrap();
        prop_assert!((it.lambda_min / est.lambda_min - 1.0).abs() <= 1e-6);
        prop_assert!((it.lambda_max / est.lambda_max - 1.0).abs() <= 1e-6);
    }
}
