//! End-to-end equal-weight solver.

use serde::{Deserialize, Serialize};

use super::newton::solve_blocks;
use super::{atomic_solve, check_residual, empirical_moments, largest_remainder, MomentVector};
use crate::{tol, Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Attempt dimensions below the guaranteed `16 (2T+1) T^{5/2}` threshold.
    pub best_effort: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSolution {
    pub angles: Vec<f64>,
    /// Largest per-moment deviation of the returned angles.
    pub residual: f64,
    /// True when `N` was below the guaranteed threshold.
    pub best_effort: bool,
}

/// Smallest `N` for which the solver is guaranteed to succeed.
pub fn guaranteed_dimension(t: usize) -> usize {
    (16.0 * (2 * t + 1) as f64 * (t as f64).powf(2.5)).ceil() as usize
}

/// `N` angles whose empirical moments equal `alpha` within `1e-8` per entry.
pub fn unitary_moment_solve(alpha: &MomentVector, n: usize) -> Result<Vec<f64>> {
    unitary_moment_solve_with(alpha, n, SolveOptions::default()).map(|s| s.angles)
}

pub fn unitary_moment_solve_with(
    alpha: &MomentVector,
    n: usize,
    opts: SolveOptions,
) -> Result<MomentSolution> {
    let t = alpha.order();
    let l1 = alpha.l1();
    if l1 > 0.25 * (1.0 + 1e-12) {
        return Err(Error::Infeasible(format!(
            "l1 bound violated: ||alpha||_1 = {l1:.6} > 1/4"
        )));
    }
    let need = guaranteed_dimension(t);
    let below = n < need;
    if below && !opts.best_effort {
        return Err(Error::Infeasible(format!(
            "dimension bound violated: N = {n} < 16(2T+1)T^(5/2) = {need}"
        )));
    }
    if t == 0 {
        let angles = (0..n)
            .map(|l| std::f64::consts::TAU * l as f64 / n as f64)
            .collect();
        return Ok(MomentSolution {
            angles,
            residual: 0.0,
            best_effort: below,
        });
    }

    // Half the angles carry an integral rounding of an atomic measure for
    // 2 alpha; the other half solve for what the rounding missed.
    let n1 = n / 2;
    let n2 = n - n1;
    let measure = atomic_solve(&alpha.scaled(2.0))?;
    let weights: Vec<f64> = measure.atoms.iter().map(|a| a.1).collect();
    let counts = largest_remainder(&weights, n1);
    let mut angles = Vec::with_capacity(n);
    for (&(a, _), &c) in measure.atoms.iter().zip(&counts) {
        angles.extend(std::iter::repeat_n(a, c));
    }
    let rounded = empirical_moments(&angles, t);
    let gamma = MomentVector::new(
        alpha
            .entries()
            .iter()
            .zip(rounded.entries())
            .map(|(a, m)| (a * n as f64 - m * n1 as f64) / n2 as f64)
            .collect(),
    );
    angles.extend(solve_blocks(&gamma, n2)?);

    let residual = check_residual(
        &empirical_moments(&angles, t),
        alpha,
        tol::MOMENT_SOLVE_RESIDUAL,
        "unitary_moment_solve",
    )?;
    Ok(MomentSolution {
        angles,
        residual,
        best_effort: below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        assert_eq!(guaranteed_dimension(2), 453);
        assert_eq!(guaranteed_dimension(3), 1746);
    }

    #[test]
    fn zero_target() {
        let a = unitary_moment_solve(&MomentVector::zeros(2), 453).unwrap();
        assert_eq!(a.len(), 453);
        assert!(empirical_moments(&a, 2).l1() <= 2e-8);
    }

    #[test]
    fn bounds_are_named() {
        let e = unitary_moment_solve(&MomentVector::from_real(&[0.3]), 10_000).unwrap_err();
        assert!(e.to_string().contains("l1 bound"));
        let e = unitary_moment_solve(&MomentVector::from_real(&[0.1]), 10).unwrap_err();
        assert!(e.to_string().contains("dimension bound"));
    }
}
