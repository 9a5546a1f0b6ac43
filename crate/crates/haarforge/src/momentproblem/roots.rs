//! Simultaneous polynomial root finding (Aberth-Ehrlich).

use num_complex::Complex64;

use crate::{Error, Result};

/// All roots of `sum_k coeffs[k] z^k`. Leading zeros are trimmed.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let c: Vec<Complex64> = coeffs[..=deg].iter().map(|z| z / coeffs[deg]).collect();

    // Initial guesses on a circle of the Cauchy-bound-ish radius, with an
    // irrational offset so no guess sits on a symmetry axis.
    let radius = (c[0].norm()).powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            Complex64::from_polar(
                radius,
                std::f64::consts::TAU * (j as f64 + 0.25) / deg as f64 + 0.4,
            )
        })
        .collect();

    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            return Ok(z);
        }
    }
    // Accept if the backward error is small even without a clean stop.
    let ok = z
        .iter()
        .all(|&r| eval_with_derivative(&c, r).0.norm() <= 1e-9 * (1.0 + r.norm()).powi(deg as i32));
    if ok {
        Ok(z)
    } else {
        Err(Error::numerical(
            deg,
            "polynomial root finder did not converge",
        ))
    }
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for coef in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + coef;
    }
    (p, dp)
}
