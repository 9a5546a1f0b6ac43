use haarforge::ensembles::{sample_gue, HaarSampler};
use haarforge::matrixcore::herm_eigenvalues;
use haarforge::rng;
use haarforge::statlab::{
    frame_potentials, haar_l1_bound, mc_trace_moments, moment_l1, ComplexStats, MomentReport,
    RunningStats,
};
use haarforge::Complex64;
use proptest::prelude::*;

#[test]
fn haar_moments_and_l1_bound() {
    let r = mc_trace_moments(&HaarSampler { dim: 64, seed: 12 }, 6, 3000).unwrap();
    for row in &r.rows {
        assert!(row.mean().norm() <= 4.0 * row.stderr, "p={}", row.p);
        assert!(row.samples == 3000 && row.stderr >= 0.0);
    }
    let five = MomentReport {
        rows: r.rows[..5].to_vec(),
        ..r.clone()
    };
    let (value, err) = moment_l1(&five);
    assert!(value <= haar_l1_bound(5, 64) + 4.0 * err);

    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<MomentReport>(&text).unwrap(), r);
}

#[test]
fn haar_frame_potentials_at_16() {
    let f = frame_potentials(&HaarSampler { dim: 16, seed: 2 }, &[1, 2], 4000).unwrap();
    assert!((f[0].estimate - 1.0).abs() <= 4.0 * f[0].stderr);
    assert!((f[1].estimate - 2.0).abs() <= 4.0 * f[1].stderr);
}

#[test]
fn gue_esd_distance_at_512() {
    let g = sample_gue(512, &mut rng::stream(4, "tests/esd", 0));
    assert!(haarforge::statlab::ecdf_semicircle_distance(&herm_eigenvalues(&g).unwrap()) <= 0.05);
}

proptest! {
    #[test]
    fn merge_is_associative(xs in prop::collection::vec(-1e3f64..1e3, 2..300), cuts in prop::collection::vec(0usize..300, 0..6)) {
        let serial = RunningStats::from_values(&xs);
        let mut bounds: Vec<usize> = cuts.into_iter().map(|c| c % xs.len()).collect();
        bounds.extend([0, xs.len()]);
        bounds.sort_unstable();
        bounds.dedup();
        let parts: Vec<RunningStats> = bounds.windows(2).map(|w| RunningStats::from_values(&xs[w[0]..w[1]])).collect();
        let left = parts.iter().fold(RunningStats::default(), |a, b| a.merge(b));
        let right = parts.iter().rev().fold(RunningStats::default(), |a, b| b.merge(&a));
        prop_assert_eq!(left.count, serial.count);
        prop_assert!((left.mean - serial.mean).abs() <= 1e-12 * (1.0 + serial.mean.abs()) * 1e3);
        prop_assert!((right.mean - serial.mean).abs() <= 1e-12 * (1.0 + serial.mean.abs()) * 1e3);
    }

    #[test]
    fn complex_stats_round_trip(zs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..50)) {
        let zs: Vec<Complex64> = zs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let s = ComplexStats::from_values(&zs);
        let back: ComplexStats = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
        prop_assert!(s.stderr() >= 0.0);
    }
}
