//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always printed.
//! A criterion listed in `UNATTAINABLE` is still evaluated exactly as stated and
//! reported as FAIL; it does not fail the suite.

use std::time::Instant;

use haarforge::ensembles::{
    sample_gue, semicircle_diagonal, semicircle_moment, BasisKind, EnsembleSpec, GueExpSampler,
    GueProductSampler, HaarSampler, UnitarySampler, W2Sampler,
};
use haarforge::khash::{hash_eval, sample_hash_from_bits, BitSource, HashFamilyMember};
use haarforge::matrixcore::herm_eigenvalues;
use haarforge::momentproblem::{
    empirical_moments, guaranteed_dimension, near_origin_solve, unitary_moment_solve, MomentVector,
};
use haarforge::ratmarkov::{
    bessel_j1, calibrate_theta, chebyshev_t, cosine_fraction, j1_envelope, lambda_n,
    paper_lambda_bound, paper_pole_set, PoleSet,
};
use haarforge::statlab::{
    concentration_tail, ecdf_semicircle_distance, frame_potentials, mc_moment_tables,
    par_map_indexed, RunningStats,
};
use haarforge::weingarten::{
    gram_inversion_holds, haar_conjugation_moment_exact, haar_conjugation_moment_mc, weingarten,
    Partition,
};
use haarforge::{rng, Complex64, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// Criteria that cannot be met as stated; see the project notes for the analysis.
const UNATTAINABLE: &[&str] = &["5b"];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        passed,
        detail,
    }
}

fn c1() -> Result<Vec<Outcome>> {
    let (_, second) = mc_moment_tables(&HaarSampler { dim: 64, seed: 1 }, 6, 20_000)?;
    let worst = second
        .iter()
        .map(|r| (r.mean - r.reference).abs() / r.stderr)
        .fold(0.0, f64::max);
    Ok(vec![outcome(
        "1",
        "Haar E|tr U^j|^2 = min(j,64) within 5 stderr, j=1..6",
        worst <= 5.0,
        format!("worst deviation {worst:.2} stderr"),
    )])
}

fn c2() -> Result<Vec<Outcome>> {
    let n = 512;
    let per_sample = par_map_indexed(200, |i| {
        let g = sample_gue(n, &mut rng::stream(2, "acceptance/gue", i as u64));
        let ev = herm_eigenvalues(&g)?;
        let m = |k: i32| ev.iter().map(|x| x.powi(k)).sum::<f64>() / n as f64;
        let norm = ev[0].abs().max(ev[n - 1].abs());
        Ok([m(2), m(3), m(4), norm, ecdf_semicircle_distance(&ev)])
    })?;
    let col =
        |j: usize| RunningStats::from_values(&per_sample.iter().map(|r| r[j]).collect::<Vec<_>>());
    let (g2, g3, g4, dist) = (col(0), col(1), col(2), col(4));
    let within_norm =
        per_sample.iter().filter(|r| r[3] <= 2.2).count() as f64 / per_sample.len() as f64;
    let passed = (g2.mean - 1.0).abs() <= 0.02
        && (g4.mean - 2.0).abs() <= 0.06
        && g3.mean.abs() <= 4.0 * g3.stderr()
        && within_norm >= 0.95
        && dist.mean <= 0.05;
    Ok(vec![outcome(
        "2",
        "GUE N=512 moments, operator norm and semicircle ESD",
        passed,
        format!(
            "btr G^2 {:.4}, btr G^4 {:.4}, btr G^3 {:.1e} ({:.1} se), norm<=2.2 in {:.0}%, ESD {:.4}",
            g2.mean,
            g4.mean,
            g3.mean,
            g3.mean.abs() / g3.stderr(),
            100.0 * within_norm,
            dist.mean
        ),
    )])
}

fn c3() -> Result<Vec<Outcome>> {
    let mut passed = true;
    let mut worst = 0.0f64;
    let mut max_norm = 0.0f64;
    for (n, q) in [(1024, 4), (4096, 8)] {
        let d = semicircle_diagonal(n, q)?;
        for k in 1..=q as u32 {
            let dev = (d.normalized_power_trace(k).re - semicircle_moment(k)).abs();
            let bound = 2f64.powi(k as i32) * (2 * q + 4) as f64 / n as f64;
            passed &= dev <= bound;
            worst = worst.max(dev / bound);
        }
        // D is diagonal, so its operator norm is the largest |entry|.
        let norm = d.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        passed &= norm <= 2.0;
        max_norm = max_norm.max(norm);
    }
    Ok(vec![outcome(
        "3",
        "semicircle diagonal moment bound and ||D|| <= 2",
        passed,
        format!("worst deviation/bound {worst:.3}, max ||D|| {max_norm:.4}"),
    )])
}

fn c4() -> Result<Vec<Outcome>> {
    let digits = ["1.915", "3.507", "5.086", "6.661"];
    let mut passed = true;
    let mut shown = Vec::new();
    for (k, want) in (1..=4).zip(digits) {
        let t = calibrate_theta(k)?;
        passed &= t.to_string().starts_with(want) && bessel_j1(2.0 * t).abs() <= 1e-8;
        shown.push(format!("{t:.6}"));
    }
    let grid_ok = (0..50).all(|i| {
        let x = 1.0 + 49.0 * i as f64 / 49.0;
        bessel_j1(x).abs() <= j1_envelope(x)
    });
    Ok(vec![outcome(
        "4",
        "theta calibration digits, J1(2 theta_k) = 0, J1 envelope on [1,50]",
        passed && grid_ok,
        format!(
            "thetas {}; envelope grid {}",
            shown.join(", "),
            if grid_ok { "ok" } else { "violated" }
        ),
    )])
}

fn c5() -> Result<Vec<Outcome>> {
    let theta = calibrate_theta(1)?;
    let (single, _) = mc_moment_tables(
        &GueExpSampler {
            dim: 256,
            theta,
            seed: 5,
        },
        2,
        300,
    )?;
    let r1 = &single.rows[0];
    let r2 = &single.rows[1];
    let limit = (bessel_j1(4.0 * theta) / (2.0 * theta)).abs();
    let (product, _) = mc_moment_tables(
        &GueProductSampler {
            dim: 256,
            theta,
            seed: 5,
        },
        8,
        300,
    )?;
    let worst_c = product
        .rows
        .iter()
        .map(|r| r.mean().norm() - 3.0 * r.stderr)
        .fold(f64::MIN, f64::max);
    Ok(vec![
        outcome(
            "5a",
            "|E btr e^{i theta1 G}| <= 0.02 + 3 stderr at N=256",
            r1.mean().norm() <= 0.02 + 3.0 * r1.stderr,
            format!("|mean| {:.2e}, stderr {:.2e}", r1.mean().norm(), r1.stderr),
        ),
        outcome(
            "5b",
            "second moment matches |J1(4 theta1)/(2 theta1)| within 0.03 and exceeds 0.05",
            (r2.mean().norm() - limit).abs() <= 0.03 && r2.mean().norm() > 0.05,
            format!(
                "|mean| {:.5} vs limit {limit:.5} (agreement ok: {}); the limit itself is below 0.05",
                r2.mean().norm(),
                (r2.mean().norm() - limit).abs() <= 0.03
            ),
        ),
        outcome(
            "5c",
            "|E btr (e^{i theta1 G} e^{i theta1 G'})^p| <= 0.05 + 3 stderr, p=1..8",
            worst_c <= 0.05,
            format!("max |mean| - 3 stderr = {worst_c:.2e}"),
        ),
    ])
}

fn c6() -> Result<Vec<Outcome>> {
    let mut closed = true;
    for n in [5u64, 8, 16] {
        let n2 = BigInt::from(n * n - 1);
        let id = weingarten(&Partition::new(vec![1, 1])?, n)?.value;
        let tr = weingarten(&Partition::new(vec![2])?, n)?.value;
        closed &= id == BigRational::new(BigInt::from(1), n2.clone());
        closed &= tr == BigRational::new(BigInt::from(-1), BigInt::from(n) * n2);
    }
    let mut gram = true;
    for q in 1..=5usize {
        for n in [q as u64, q as u64 + 1, 8] {
            gram &= gram_inversion_holds(q, n)?;
        }
    }

    let phases = |r: &mut haarforge::rng::Stream, n: usize| {
        haarforge::ensembles::DiagonalSpectrum::phase(
            (0..n)
                .map(|_| r.random::<f64>() * std::f64::consts::TAU)
                .collect(),
        )
    };
    let ident = haarforge::ensembles::DiagonalSpectrum::phase(vec![0.0; 8]);
    let mut anchors = true;
    for p in 1..=6 {
        anchors &= (haar_conjugation_moment_exact(&ident, &ident, p, 8)? - 1.0).norm() <= 1e-12;
    }
    let mut r = rng::stream(6, "acceptance/weingarten", 0);
    let mut worst_z = 0.0f64;
    for pair in 0..5u64 {
        let d1 = phases(&mut r, 8);
        let d2 = phases(&mut r, 8);
        let p1 = haar_conjugation_moment_exact(&d1, &d2, 1, 8)?;
        let want = d1.normalized_power_trace(1) * d2.normalized_power_trace(1);
        anchors &= (p1 - want).norm() <= 1e-12;
        for p in [2, 3] {
            let exact = haar_conjugation_moment_exact(&d1, &d2, p, 8)?;
            let (mean, se) = haar_conjugation_moment_mc(&d1, &d2, p, 50_000, 100 + pair)?;
            worst_z = worst_z.max((mean - exact).norm() / se);
        }
    }
    Ok(vec![outcome(
        "6",
        "Weingarten q=2 closed forms, Gram inversion, conjugation moment anchors",
        closed && gram && anchors && worst_z <= 4.0,
        format!("closed forms {closed}, Gram {gram}, identity/p=1 anchors {anchors}, MC worst {worst_z:.2} stderr"),
    )])
}

fn random_target(
    r: &mut impl Rng,
    t: usize,
    norm: impl Fn(&MomentVector) -> f64,
    size: f64,
) -> MomentVector {
    let raw = MomentVector::new(
        (0..t)
            .map(|_| {
                Complex64::from_polar(
                    r.random::<f64>() + 0.05,
                    r.random::<f64>() * std::f64::consts::TAU,
                )
            })
            .collect(),
    );
    let s = norm(&raw);
    raw.scaled(size / s)
}

fn c7() -> Result<Vec<Outcome>> {
    let mut r = rng::stream(7, "acceptance/momentsolve", 0);
    let mut solved = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = r.random_range(1..=4);
        let size = 0.25 * r.random::<f64>().sqrt();
        let alpha = random_target(&mut r, t, MomentVector::l1, size);
        if let Ok(angles) = unitary_moment_solve(&alpha, guaranteed_dimension(t)) {
            let dev = empirical_moments(&angles, t).max_deviation(&alpha);
            worst = worst.max(dev);
            solved += (dev <= 1e-8) as usize;
        }
    }
    let boundary = MomentVector::new(vec![Complex64::new(0.1, 0.1), Complex64::new(-0.05, 0.0)]);
    let boundary = boundary.scaled(0.25 / boundary.l1());
    let boundary_ok = unitary_moment_solve(&boundary, 453)
        .map(|a| empirical_moments(&a, 2).max_deviation(&boundary) <= 1e-8)
        .unwrap_or(false);

    let mut near_ok = 0;
    let mut near_worst = 0.0f64;
    for i in 0..100 {
        let t = r.random_range(1..=4);
        let radius = 1.0 / (8.0 * (t as f64).powf(1.5));
        let alpha = random_target(&mut r, t, MomentVector::l2, radius);
        let n = [2 * t, 2 * t + 1, 48][i % 3];
        if let Ok(angles) = near_origin_solve(&alpha, n) {
            let dev = empirical_moments(&angles, t).max_deviation(&alpha);
            near_worst = near_worst.max(dev);
            near_ok += (dev <= 1e-10 && angles.len() == n) as usize;
        }
    }
    Ok(vec![outcome(
        "7",
        "moment solver: 100 random targets, boundary case, near-origin radius",
        solved == 100 && boundary_ok && near_ok == 100,
        format!(
            "solved {solved}/100 (worst {worst:.1e}), boundary N=453 {boundary_ok}, near-origin {near_ok}/100 (worst {near_worst:.1e})"
        ),
    )])
}

fn c8() -> Result<Vec<Outcome>> {
    let theta = calibrate_theta(1)?;
    let pairs = 8000;
    let haar = frame_potentials(&HaarSampler { dim: 16, seed: 8 }, &[1, 2], pairs)?;
    let mut out = Vec::new();
    for (id, basis, tol) in [
        ("8a", BasisKind::Haar, 0.10),
        ("8b", BasisKind::HashedCircuit, 0.15),
    ] {
        let mut spec = EnsembleSpec::haar(16, 64, 3, theta, 8);
        spec.basis = basis;
        if basis == BasisKind::HashedCircuit {
            spec.circuit_length = 300;
        }
        let f = frame_potentials(&W2Sampler { spec }, &[1, 2], pairs)?;
        let rel = [
            (f[0].estimate - 1.0).abs(),
            (f[1].estimate - 2.0).abs() / 2.0,
        ];
        out.push(outcome(
            id,
            if basis == BasisKind::Haar {
                "W2 frame potential T=1,2 within 10% of T! (Haar bases)"
            } else {
                "W2 frame potential T=1,2 within 15% of T! (hashed circuits, length 300)"
            },
            rel.iter().all(|&e| e <= tol),
            format!(
                "F1 {:.3}+-{:.3}, F2 {:.3}+-{:.3}; Haar reference F1 {:.3}+-{:.3}, F2 {:.3}+-{:.3}",
                f[0].estimate,
                f[0].stderr,
                f[1].estimate,
                f[1].stderr,
                haar[0].estimate,
                haar[0].stderr,
                haar[1].estimate,
                haar[1].stderr
            ),
        ));
    }
    Ok(out)
}

fn c9() -> Result<Vec<Outcome>> {
    let theta = calibrate_theta(1)?;
    let n = 128;
    let grid = |s: f64| -> Vec<f64> {
        let t_max = (s * 1000f64.ln() / n as f64).sqrt();
        (1..=10).map(|j| t_max * j as f64 / 10.0).collect()
    };
    let s1 = 2.0 * theta * theta;
    let single = GueExpSampler {
        dim: n,
        theta,
        seed: 9,
    };
    let rows1 = concentration_tail(
        |i| Ok(single.moments(i as u64, 1)?.entries()[0]),
        |t| (-(n as f64) * t * t / s1).exp(),
        &grid(s1),
        2000,
    )?;
    let p = 3;
    let s3 = 4.0 * (p * p) as f64 * theta * theta;
    let product = GueProductSampler {
        dim: n,
        theta,
        seed: 9,
    };
    let rows3 = concentration_tail(
        |i| Ok(product.moments(i as u64, p)?.entries()[p - 1]),
        |t| (-(n as f64) * t * t / s3).exp(),
        &grid(s3),
        2000,
    )?;
    let flagged = rows1.iter().chain(&rows3).filter(|r| r.flagged).count();
    Ok(vec![outcome(
        "9",
        "concentration tails below the sub-Gaussian bounds (single, product p=3)",
        flagged == 0,
        format!(
            "{flagged} flagged t of 20; largest empirical tails {:.4} / {:.4}",
            rows1[0].empirical, rows3[0].empirical
        ),
    )])
}

fn c10() -> Result<Vec<Outcome>> {
    let mut uniform = true;
    for k in [2usize, 3] {
        let q = 8u64;
        let inputs: Vec<Vec<u64>> = tuples(k, q).into_iter().filter(|x| distinct(x)).collect();
        let members: Vec<HashFamilyMember> = tuples(k, q)
            .into_iter()
            .map(|c| HashFamilyMember::new(3, 3, c))
            .collect::<Result<_>>()?;
        for xs in &inputs {
            let mut counts = vec![0u32; q.pow(k as u32) as usize];
            for h in &members {
                let idx = xs
                    .iter()
                    .try_fold(0u64, |acc, &x| hash_eval(h, x).map(|v| acc * q + v))?;
                counts[idx as usize] += 1;
            }
            uniform &= counts.iter().all(|&c| c == 1);
        }
    }
    let mut budget = true;
    for (k, w_in, w_out) in [(3usize, 16u32, 16u32), (4, 6, 64), (2, 10, 3), (1, 64, 1)] {
        let mut r = rng::stream(10, "acceptance/khash", 0);
        let mut bits = BitSource::new(&mut r);
        sample_hash_from_bits(k, w_in, w_out, &mut bits)?;
        budget &= bits.consumed() == HashFamilyMember::bit_cost(k, w_in, w_out)
            && bits.consumed() == k as u64 * u64::from(w_in.max(w_out));
    }
    Ok(vec![outcome(
        "10",
        "exact k-wise uniformity on GF(2^3), k=2,3; bit budget k*max(w_in,w_out)",
        uniform && budget,
        format!("uniformity {uniform}, budget {budget}"),
    )])
}

fn tuples(k: usize, q: u64) -> Vec<Vec<u64>> {
    (0..q.pow(k as u32))
        .map(|mut i| {
            (0..k)
                .map(|_| {
                    let d = i % q;
                    i /= q;
                    d
                })
                .collect()
        })
        .collect()
}

fn distinct(x: &[u64]) -> bool {
    x.iter().enumerate().all(|(i, a)| !x[..i].contains(a))
}

fn c11() -> Result<Vec<Outcome>> {
    let grid: Vec<f64> = (0..=2000).map(|i| -1.0 + i as f64 / 1000.0).collect();
    let mut below = true;
    let mut ratios = Vec::new();
    for p in 2..=4 {
        let poles = paper_pole_set(p)?;
        let peak = grid
            .iter()
            .map(|&x| lambda_n(&poles, x))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        below &= peak < paper_lambda_bound(p);
        ratios.push(format!("p={p}: {peak:.2} < {:.2}", paper_lambda_bound(p)));
    }
    let mut cheb = 0.0f64;
    for n in 1..=12 {
        let zero = PoleSet::zeros(n);
        for &x in &grid {
            cheb = cheb.max((cosine_fraction(&zero, x)? - chebyshev_t(n, x)).abs());
        }
    }
    Ok(vec![outcome(
        "11",
        "lambda_n below 4p + 4p sqrt2 (p-1); zero poles give Chebyshev T_n",
        below && cheb <= 1e-10,
        format!("{}; Chebyshev deviation {cheb:.1e}", ratios.join(", ")),
    )])
}

type Criterion = fn() -> Result<Vec<Outcome>>;

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("1", c1),
        ("2", c2),
        ("3", c3),
        ("4", c4),
        ("5", c5),
        ("6", c6),
        ("7", c7),
        ("8", c8),
        ("9", c9),
        ("10", c10),
        ("11", c11),
    ];
    let mut unexpected = Vec::new();
    for (id, f) in criteria {
        let start = Instant::now();
        let outcomes = match f() {
            Ok(o) => o,
            Err(e) => vec![Outcome {
                id: "?",
                title: "criterion raised an error",
                passed: false,
                detail: format!("{id}: {e}"),
            }],
        };
        let secs = start.elapsed().as_secs_f64();
        for o in outcomes {
            let known = UNATTAINABLE.contains(&o.id);
            let status = if o.passed { "PASS" } else { "FAIL" };
            let note = if !o.passed && known {
                " [known unattainable]"
            } else {
                ""
            };
            println!(
                "{status} {:<3} {} | {}{note} ({secs:.1}s)",
                o.id, o.title, o.detail
            );
            if !o.passed && !known {
                unexpected.push(o.id);
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
