use haarforge::ensembles::{sample_gue, sample_haar};
use haarforge::matrixcore::{
    herm_eig, herm_eigenvalues, operator_norm, trace_power_moments, trace_power_moments_with,
    unitary_exp, MomentPath,
};
use haarforge::rng;
use proptest::prelude::*;

#[test]
fn random_hermitian_reconstruction() {
    let h = sample_gue(16, &mut rng::stream(1, "tests/matrixcore", 0));
    let e = herm_eig(&h).unwrap();
    assert!(e.reconstruction_residual(&h) <= 1e-10 * h.matrix().frobenius_norm());
    assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn operator_norm_matches_spectrum() {
    let h = sample_gue(20, &mut rng::stream(2, "tests/matrixcore", 0));
    let ev = herm_eigenvalues(&h).unwrap();
    let want = ev[0].abs().max(ev[19].abs());
    assert!((operator_norm(h.matrix()).unwrap() - want).abs() <= 1e-9);
}

#[test]
fn moment_paths_agree_on_haar() {
    for i in 0..5 {
        let u = sample_haar(24, &mut rng::stream(3, "tests/matrixcore", i));
        let a = trace_power_moments_with(&u, 12, MomentPath::MatrixPowers).unwrap();
        let b = trace_power_moments_with(&u, 12, MomentPath::Eigenphases).unwrap();
        assert!(a.max_deviation(&b) <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_inverse_and_trace_invariants(seed in any::<u64>(), n in 1usize..24, theta in -4.0f64..4.0) {
        let h = sample_gue(n, &mut rng::stream(seed, "tests/matrixcore/prop", 0));
        let u = unitary_exp(&h, theta).unwrap();
        let v = unitary_exp(&h, -theta).unwrap();
        let prod = u.compose(&v).unwrap();
        prop_assert!(prod.matrix().distance(&haarforge::matrixcore::ComplexMatrix::identity(n)) <= 1e-10);

        let ev = herm_eigenvalues(&h).unwrap();
        let norm = ev[0].abs().max(ev[n - 1].abs());
        let tr: f64 = ev.iter().sum();
        prop_assert!((tr - h.matrix().trace().re).abs() <= 1e-10 * n as f64 * norm.max(1.0));

        let m = trace_power_moments(&u, 6.min(4 * n)).unwrap();
        prop_assert!(m.entries().iter().all(|z| z.norm() <= 1.0 + 1e-12));
    }
}
