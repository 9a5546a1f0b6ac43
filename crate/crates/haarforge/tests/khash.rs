use std::collections::HashMap;

use haarforge::ensembles::random_local_circuit;
use haarforge::khash::{hash_eval, hashed_seed_stream, sample_hash, BinaryField, HashFamilyMember};
use haarforge::rng;

fn for_each_tuple(len: usize, base: u64, mut f: impl FnMut(&[u64])) {
    let mut t = vec![0u64; len];
    loop {
        f(&t);
        let mut i = 0;
        while i < len {
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

/// Every k-tuple of distinct inputs maps to each output k-tuple exactly once over all members.
fn assert_exact_uniformity(w: u32, k: usize) {
    let q = 1u64 << w;
    for_each_tuple(k, q, |xs| {
        let mut distinct = xs.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < k {
            return;
        }
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for_each_tuple(k, q, |coeffs| {
            let h = HashFamilyMember::new(w, w, coeffs.to_vec()).unwrap();
            *counts
                .entry(xs.iter().map(|&x| hash_eval(&h, x).unwrap()).collect())
                .or_default() += 1;
        });
        assert_eq!(counts.len() as u64, q.pow(k as u32));
        assert!(counts.values().all(|&c| c == 1));
    });
}

#[test]
fn exact_k_wise_uniformity_gf8() {
    assert_exact_uniformity(3, 2);
    assert_exact_uniformity(3, 3);
}

#[test]
fn gf16_axioms_by_enumeration() {
    let f = BinaryField::new(4).unwrap();
    for a in 0..16 {
        for b in 0..16 {
            assert_eq!(f.mul(a, b), f.mul(b, a));
            for c in 0..16 {
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }
}

#[test]
fn seeds_are_pairwise_independent_at_tiny_width() {
    // With k = 2 and w = 3, the seed pair for inputs (1, 5) is uniform over all 64 pairs.
    let mut seen = HashMap::new();
    for_each_tuple(2, 8, |c| {
        let h = HashFamilyMember::new(3, 3, c.to_vec()).unwrap();
        *seen
            .entry((
                hashed_seed_stream(&h, 1).unwrap(),
                hashed_seed_stream(&h, 5).unwrap(),
            ))
            .or_insert(0) += 1;
    });
    assert_eq!(seen.len(), 64);
}

#[test]
fn coefficient_change_changes_a_circuit() {
    let mut r = rng::stream(1, "tests/khash", 0);
    let h = sample_hash(3, 4, 64, &mut r).unwrap();
    let mut g = h.clone();
    g.coeffs[1] ^= 1;
    let circuits = |h: &HashFamilyMember| {
        (0..16)
            .map(|j| random_local_circuit(3, 40, hashed_seed_stream(h, j).unwrap()).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(circuits(&h), circuits(&h));
    assert!(circuits(&h).iter().zip(circuits(&g)).any(|(a, b)| *a != b));
}
