use std::sync::Arc;

use haarforge::ensembles::{
    compose_boost, random_local_circuit, sample_gue, sample_haar, sample_w2, semicircle_diagonal,
    sum_hamiltonian, BoostedSampler, CircuitSampler, EnsembleSpec, HaarSampler, LeftMultiplied,
    UnitarySampler,
};
use haarforge::matrixcore::{hermitian_trace_moments, trace_power_moments, UnitaryMatrix};
use haarforge::ratmarkov::calibrate_theta;
use haarforge::rng;
use haarforge::statlab::{frame_potential, mc_moment_tables, mc_trace_moments, RunningStats};

#[test]
fn gue_moments_at_256() {
    let (mut m2, mut m3, mut m4) = (
        RunningStats::default(),
        RunningStats::default(),
        RunningStats::default(),
    );
    for i in 0..500 {
        let m = hermitian_trace_moments(&sample_gue(256, &mut rng::stream(21, "tests/gue", i)), 4);
        m2.push(m[1]);
        m3.push(m[2]);
        m4.push(m[3]);
    }
    assert!((m2.mean - 1.0).abs() <= 4.0 * m2.stderr());
    assert!(m3.mean.abs() <= 4.0 * m3.stderr());
    // Finite-N correction to Cat_2 is 1/N^2.
    assert!((m4.mean - 2.0).abs() <= 4.0 * m4.stderr() + 1.0 / (256.0 * 256.0));
}

#[test]
fn haar_trace_is_centered_and_left_invariant() {
    let haar: Arc<dyn UnitarySampler> = Arc::new(HaarSampler { dim: 6, seed: 4 });
    let r = mc_trace_moments(haar.as_ref(), 1, 4000).unwrap();
    assert!(r.rows[0].mean().norm() <= 4.0 * r.rows[0].stderr);

    let v = sample_haar(6, &mut rng::stream(99, "tests/fixed_v", 0));
    let left = LeftMultiplied {
        v,
        inner: Arc::new(HaarSampler { dim: 6, seed: 5 }),
    };
    let (_, a) = mc_moment_tables(haar.as_ref(), 4, 4000).unwrap();
    let (_, b) = mc_moment_tables(&left, 4, 4000).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let se = (x.stderr.powi(2) + y.stderr.powi(2)).sqrt();
        assert!(
            (x.mean - y.mean).abs() <= 5.0 * se,
            "k={} {} vs {}",
            x.j,
            x.mean,
            y.mean
        );
    }
}

#[test]
fn semicircle_examples() {
    let d = semicircle_diagonal(1024, 4).unwrap();
    assert!((d.normalized_power_trace(2).re - 1.0).abs() <= 4.0 * 12.0 / 1024.0);
    assert!(d.normalized_power_trace(1).norm() <= 2.0 * 12.0 / 1024.0);
    assert!(d.values.iter().all(|v| v.abs() <= 2.0));
    assert_eq!(d, semicircle_diagonal(1024, 4).unwrap());
}

#[test]
fn sum_hamiltonian_second_moment() {
    let (n, m) = (256, 64);
    let d = semicircle_diagonal(n, 4).unwrap();
    let b1 = d.normalized_power_trace(1).re;
    let want = d.normalized_power_trace(2).re + (m as f64 - 1.0) * b1 * b1;
    let mut got = RunningStats::default();
    for i in 0..3 {
        let mut r = rng::stream(8, "tests/sum_hamiltonian", i);
        let bases: Vec<UnitaryMatrix> = (0..m).map(|_| sample_haar(n, &mut r)).collect();
        let h = sum_hamiltonian(&d, &bases).unwrap();
        assert!(h.matrix().hermiticity_residual() <= 1e-12);
        got.push(hermitian_trace_moments(&h, 2)[1]);
    }
    assert!((got.mean - want).abs() <= 0.1 * want);
}

#[test]
fn w2_samples_are_unitary() {
    let spec = EnsembleSpec::haar(32, 8, 3, calibrate_theta(1).unwrap(), 3);
    for i in 0..4 {
        let w = sample_w2(&spec, i).unwrap();
        assert!(w.unitarity_residual() <= 1e-8 * (32f64).sqrt());
        assert!(trace_power_moments(&w, 8)
            .unwrap()
            .entries()
            .iter()
            .all(|z| z.norm() <= 1.0 + 1e-12));
    }
}

#[test]
fn w2_suppresses_moments_at_256() {
    let spec = EnsembleSpec::haar(256, 64, 4, calibrate_theta(1).unwrap(), 17);
    let sampler = haarforge::ensembles::W2Sampler { spec };
    let r = mc_trace_moments(&sampler, 8, 40).unwrap();
    for row in &r.rows {
        assert!(row.mean().norm() <= 0.05 + 3.0 * row.stderr, "p={}", row.p);
    }
}

#[test]
fn short_circuits_on_two_qubits() {
    assert!(
        random_local_circuit(4, 200, 77)
            .unwrap()
            .unitarity_residual()
            <= 1e-10
    );
    let s = CircuitSampler {
        n_qubits: 2,
        length: 500,
        seed: 6,
    };
    let (_, second) = mc_moment_tables(&s, 1, 5000).unwrap();
    assert!((second[0].mean - 1.0).abs() <= 0.1, "{}", second[0].mean);
}

#[test]
fn boosting_orders_frame_potentials() {
    let inner: Arc<dyn UnitarySampler> = Arc::new(CircuitSampler {
        n_qubits: 4,
        length: 12,
        seed: 1,
    });
    let (f1, e1) = frame_potential(
        &BoostedSampler {
            inner: inner.clone(),
            k: 1,
        },
        2,
        1500,
    )
    .unwrap();
    let (f2, e2) = frame_potential(&BoostedSampler { inner, k: 2 }, 2, 1500).unwrap();
    assert!(f2 <= f1 + 3.0 * (e1 * e1 + e2 * e2).sqrt(), "{f1} {f2}");
    assert!(f2 >= 2.0 - 3.0 * e2);

    let u = sample_haar(5, &mut rng::stream(0, "tests/boost", 0));
    assert_eq!(compose_boost(std::slice::from_ref(&u)).unwrap(), u);
}
