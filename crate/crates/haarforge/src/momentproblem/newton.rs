//! Equal-weight angle solver for targets near the origin.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

use super::{check_residual, empirical_moments, wrap_angle, MomentVector};
use crate::{tol, Error, Result};

/// Levenberg-damped minimum-norm Gauss-Newton step `s` with `J s ~ F`.
///
/// Wide systems use `J^T (J J^T + mu I)^{-1} F`, tall ones the normal
/// equations; `mu` is relative to the largest diagonal entry.
pub(crate) fn damped_step(jac: &Mat<f64>, f: &[f64], mu: f64) -> Option<Vec<f64>> {
    let (m, n) = (jac.nrows(), jac.ncols());
    let fm = Mat::from_fn(f.len(), 1, |i, _| f[i]);
    let step = if m <= n {
        let mut g = jac * jac.transpose();
        let scale = (0..m)
            .map(|i| g[(i, i)])
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..m {
            g[(i, i)] += mu * scale;
        }
        let y = g.partial_piv_lu().solve(&fm);
        jac.transpose() * &y
    } else {
        let mut g = jac.transpose() * jac;
        let scale = (0..n)
            .map(|i| g[(i, i)])
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            g[(i, i)] += mu * scale;
        }
        let rhs = jac.transpose() * &fm;
        g.partial_piv_lu().solve(&rhs)
    };
    let out: Vec<f64> = (0..n).map(|i| step[(i, 0)]).collect();
    out.iter().all(|x| x.is_finite()).then_some(out)
}

/// `N` angles with empirical moments `alpha` (per entry within `1e-10`).
///
/// Requires `||alpha||_2 <= 1/(8 T^{3/2})` and `N >= 2T`. The angles are split
/// into blocks of `2T+1` (the last block absorbs the remainder), each block
/// solving the same target by damped Newton from an equispaced start.
pub fn near_origin_solve(alpha: &MomentVector, n: usize) -> Result<Vec<f64>> {
    let t = alpha.order();
    let radius = 1.0 / (8.0 * (t as f64).powf(1.5));
    if alpha.l2() > radius * (1.0 + 1e-12) {
        return Err(Error::Infeasible(format!(
            "||alpha||_2 = {:.4e} exceeds the near-origin radius {radius:.4e}",
            alpha.l2()
        )));
    }
    solve_blocks(alpha, n)
}

/// Block solver without the radius precondition (used in best-effort mode).
pub(crate) fn solve_blocks(alpha: &MomentVector, n: usize) -> Result<Vec<f64>> {
    let t = alpha.order();
    if t == 0 {
        return Ok(equispaced(n, 0.0));
    }
    if n < 2 * t {
        return Err(Error::InvalidArgument(format!(
            "need N >= 2T = {}, got {n}",
            2 * t
        )));
    }
    let start = equispaced(n, 0.0);
    if empirical_moments(&start, t).max_deviation(alpha) <= tol::NEAR_ORIGIN_RESIDUAL {
        return Ok(start);
    }

    let b = 2 * t + 1;
    let blocks = (n / b).max(1);
    let mut sizes = vec![b; blocks - 1];
    sizes.push(n - (blocks - 1) * b);

    let mut angles = Vec::with_capacity(n);
    let mut solved: Vec<(usize, Vec<f64>)> = Vec::new();
    for &size in &sizes {
        // Blocks of equal size share the same solution.
        if let Some((_, a)) = solved.iter().find(|(s, _)| *s == size) {
            angles.extend_from_slice(a);
            continue;
        }
        let a = solve_block(alpha, size)?;
        angles.extend_from_slice(&a);
        solved.push((size, a));
    }
    check_residual(
        &empirical_moments(&angles, t),
        alpha,
        tol::NEAR_ORIGIN_RESIDUAL,
        "near_origin_solve",
    )?;
    Ok(angles)
}

fn equispaced(n: usize, offset: f64) -> Vec<f64> {
    (0..n)
        .map(|l| wrap_angle(offset + std::f64::consts::TAU * l as f64 / n as f64))
        .collect()
}

fn solve_block(alpha: &MomentVector, n: usize) -> Result<Vec<f64>> {
    // Rotating the start is a symmetry of the zero target; it moves the
    // iteration off saddle points when the block is square.
    let step = std::f64::consts::TAU / n as f64;
    for s in 0..16 {
        let offset = step * (s as f64) / 16.0 * 0.9;
        if let Some(a) = newton(alpha, equispaced(n, offset)) {
            return Ok(a);
        }
    }
    Err(Error::numerical(
        n,
        format!(
            "Newton did not converge within {} iterations",
            tol::NEWTON_MAX_ITERS
        ),
    ))
}

fn residual_vec(alpha: &MomentVector, angles: &[f64]) -> (Vec<f64>, f64) {
    let m = empirical_moments(angles, alpha.order());
    let mut f = Vec::with_capacity(2 * alpha.order());
    let mut worst: f64 = 0.0;
    for (got, want) in m.entries().iter().zip(alpha.entries()) {
        let r = got - want;
        worst = worst.max(r.norm());
        f.push(r.re);
        f.push(r.im);
    }
    (f, worst)
}

fn newton(alpha: &MomentVector, mut theta: Vec<f64>) -> Option<Vec<f64>> {
    let t = alpha.order();
    let n = theta.len();
    let nf = n as f64;
    let (mut f, mut worst) = residual_vec(alpha, &theta);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let mut mu = 1e-14;
    for _ in 0..tol::NEWTON_MAX_ITERS {
        if worst <= 1e-14 {
            break;
        }
        let jac = Mat::from_fn(2 * t, n, |row, l| {
            let k = (row / 2 + 1) as f64;
            let d = Complex64::new(0.0, k / nf) * Complex64::from_polar(1.0, k * theta[l]);
            if row % 2 == 0 {
                d.re
            } else {
                d.im
            }
        });
        let f0 = norm(&f);
        let mut accepted = false;
        while !accepted && mu < 1e6 {
            let step = damped_step(&jac, &f, mu)?;
            let mut scale = 1.0;
            for _ in 0..=tol::NEWTON_MAX_HALVINGS {
                let cand: Vec<f64> = theta
                    .iter()
                    .zip(&step)
                    .map(|(x, s)| x - scale * s)
                    .collect();
                let (f2, w2) = residual_vec(alpha, &cand);
                if norm(&f2) < f0 {
                    theta = cand;
                    f = f2;
                    worst = w2;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if accepted {
                mu = (mu * 0.1).max(1e-14);
            } else {
                mu *= 100.0;
            }
        }
        if !accepted {
            break;
        }
    }
    (worst <= tol::NEAR_ORIGIN_RESIDUAL * 1e-2).then(|| theta.into_iter().map(wrap_angle).collect())
}
