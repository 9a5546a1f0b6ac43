//! Atomic decomposition of a feasible moment sequence (Pisarenko extension).

use faer::linalg::solvers::SolveLstsq;
use faer::{Mat, Side};
use num_complex::Complex64;

use super::newton::damped_step;
use super::roots::polynomial_roots;
use super::{check_residual, toeplitz, wrap_angle, AtomicMeasure, MomentVector};
use crate::{tol, Error, Result};

/// Below this smallest eigenvalue a leading Toeplitz block counts as singular.
const SINGULAR: f64 = 1e-11;

/// At most `T + 1` atoms on the unit circle whose first `T` moments equal `beta`.
///
/// If the Toeplitz matrix is positive definite, `beta_{T+1}` is chosen on the
/// boundary of its admissible disk so the extended matrix becomes singular;
/// the null vector's polynomial then has all its roots on the circle. If a
/// leading block is already singular its null vector is used directly.
pub fn atomic_solve(beta: &MomentVector) -> Result<AtomicMeasure> {
    let t = beta.order();
    if t == 0 {
        return AtomicMeasure::new(vec![(0.0, 1.0)], None);
    }
    let full = toeplitz(beta, t);
    let ev = full
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::numerical(t + 1, format!("eigensolver failed: {e:?}")))?;
    if ev[0] < -tol::PSD {
        return Err(Error::Infeasible(format!(
            "Toeplitz moment matrix is not PSD (min eigenvalue {:.3e})",
            ev[0]
        )));
    }

    let singular_order = (1..=t).find(|&r| {
        let h = toeplitz(beta, r);
        h.self_adjoint_eigenvalues(Side::Lower)
            .map(|e| e[0] <= SINGULAR)
            .unwrap_or(false)
    });

    let null_poly = match singular_order {
        Some(r) => smallest_eigenvector(&toeplitz(beta, r))?,
        None => {
            let x = boundary_extension(beta)?;
            let mut ext: Vec<Complex64> = beta.entries().to_vec();
            ext.push(x);
            smallest_eigenvector(&toeplitz(&MomentVector::new(ext), t + 1))?
        }
    };

    let roots = polynomial_roots(&null_poly)?;
    let mut angles: Vec<f64> = roots.iter().map(|z| wrap_angle(z.arg())).collect();
    angles.sort_by(f64::total_cmp);
    let mut weights = vandermonde_weights(&angles, beta)?;
    polish(&mut angles, &mut weights, beta);

    let mut atoms: Vec<(f64, f64)> = angles
        .into_iter()
        .zip(weights)
        .filter(|&(_, w)| w > 1e-15)
        .map(|(a, w)| (wrap_angle(a), w))
        .collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    for a in atoms.iter_mut() {
        a.1 /= total;
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    if atoms.len() > 2 * t + 1 {
        return Err(Error::numerical(
            t,
            format!("{} atoms exceed the 2T+1 cap", atoms.len()),
        ));
    }
    let measure = AtomicMeasure::new(atoms, None)?;
    check_residual(
        &measure.moments(t),
        beta,
        tol::ATOMIC_RESIDUAL,
        "atomic_solve",
    )?;
    Ok(measure)
}

/// `beta_{T+1} = c - rho`, a point on the boundary of the disk of values
/// keeping the extended Toeplitz matrix PSD.
fn boundary_extension(beta: &MomentVector) -> Result<Complex64> {
    let t = beta.order();
    let h = toeplitz(beta, t);
    let lu = h.partial_piv_lu();
    // w = (0, beta_T, ..., beta_1): last column of the extension minus its corner entry.
    let w = Mat::from_fn(t + 1, 1, |j, _| {
        if j == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            beta.get((t + 1 - j) as isize)
        }
    });
    let e0 = Mat::from_fn(t + 1, 1, |j, _| {
        if j == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    use faer::linalg::solvers::Solve;
    let gw = lu.solve(&w);
    let ge0 = lu.solve(&e0);
    let g = ge0[(0, 0)].re;
    if !(g > 0.0) {
        return Err(Error::numerical(t + 1, "Toeplitz inverse lost positivity"));
    }
    let wgw: f64 = (0..=t).map(|j| (w[(j, 0)].conj() * gw[(j, 0)]).re).sum();
    let gw0 = gw[(0, 0)];
    let center = -gw0 / g;
    let rho2 = (1.0 - wgw + gw0.norm_sqr() / g) / g;
    Ok(center - rho2.max(0.0).sqrt())
}

fn smallest_eigenvector(h: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numerical(n, format!("eigensolver failed: {e:?}")))?;
    let u = evd.U();
    Ok((0..n).map(|i| u[(i, 0)]).collect())
}

/// Least-squares weights for `sum_j w_j e^{i k a_j} = beta_k`, `k = 0..=T`.
fn vandermonde_weights(angles: &[f64], beta: &MomentVector) -> Result<Vec<f64>> {
    let t = beta.order();
    let v = Mat::from_fn(t + 1, angles.len(), |k, j| {
        Complex64::from_polar(1.0, k as f64 * angles[j])
    });
    let rhs = Mat::from_fn(t + 1, 1, |k, _| beta.get(k as isize));
    let sol = v.qr().solve_lstsq(&rhs);
    let w: Vec<f64> = (0..angles.len()).map(|j| sol[(j, 0)].re).collect();
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical(t, "Vandermonde weights are not finite"));
    }
    Ok(w)
}

/// A few damped Gauss-Newton passes on (angles, weights) to remove the
/// round-off left by root finding.
fn polish(angles: &mut [f64], weights: &mut [f64], beta: &MomentVector) {
    let t = beta.order();
    let d = angles.len();
    let residual = |a: &[f64], w: &[f64]| -> Vec<f64> {
        let mut f = Vec::with_capacity(2 * t + 2);
        for k in 0..=t {
            let s: Complex64 = a
                .iter()
                .zip(w)
                .map(|(&x, &y)| Complex64::from_polar(y, k as f64 * x))
                .sum();
            let r = s - beta.get(k as isize);
            f.push(r.re);
            f.push(r.im);
        }
        f
    };
    let norm = |f: &[f64]| f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut f = residual(angles, weights);
    for _ in 0..20 {
        let fnorm = norm(&f);
        if fnorm < 1e-15 {
            break;
        }
        let jac = Mat::from_fn(2 * t + 2, 2 * d, |row, col| {
            let k = (row / 2) as f64;
            let (j, is_weight) = (col % d, col >= d);
            let z = if is_weight {
                Complex64::from_polar(1.0, k * angles[j])
            } else {
                Complex64::new(0.0, k) * Complex64::from_polar(weights[j], k * angles[j])
            };
            if row % 2 == 0 {
                z.re
            } else {
                z.im
            }
        });
        let Some(step) = damped_step(&jac, &f, 1e-14) else {
            break;
        };
        let a2: Vec<f64> = angles.iter().zip(&step[..d]).map(|(x, s)| x - s).collect();
        let w2: Vec<f64> = weights.iter().zip(&step[d..]).map(|(x, s)| x - s).collect();
        let f2 = residual(&a2, &w2);
        if norm(&f2) >= fnorm {
            break;
        }
        angles.copy_from_slice(&a2);
        weights.copy_from_slice(&w2);
        f = f2;
    }
}
