//! The unitary moment problem.
//!
//! Given target normalized trace moments `alpha_1..alpha_T`, find `N` angles
//! whose empirical power sums `(1/N) sum_l e^{i k theta_l}` reproduce them.
//! The pipeline is: Toeplitz feasibility check, an atomic decomposition of
//! `2 alpha` ([`atomic_solve`]), rounding to half of the angles, and a Newton
//! correction on the remaining half ([`near_origin_solve`]). Every returned
//! angle set is re-evaluated against the target before it leaves the module.

mod atomic;
mod newton;
mod roots;
mod solve;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrixcore::{ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

pub use atomic::atomic_solve;
pub use newton::near_origin_solve;
pub use roots::polynomial_roots;
pub use solve::{
    guaranteed_dimension, unitary_moment_solve, unitary_moment_solve_with, MomentSolution,
    SolveOptions,
};

/// `(alpha_1, ..., alpha_T)`; `alpha_0 = 1` is implicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    entries: Vec<Complex64>,
}

impl MomentVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(t: usize) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); t],
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            entries: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Validated constructor: every entry finite.
    pub fn try_new(entries: Vec<Complex64>) -> Result<Self> {
        if entries
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidArgument(
                "moment vector has non-finite entries".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Number of moments `T`.
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    /// `alpha_k` for `k` in `-T..=T`, with `alpha_0 = 1` and `alpha_{-k} = conj(alpha_k)`.
    pub fn get(&self, k: isize) -> Complex64 {
        match k {
            0 => Complex64::new(1.0, 0.0),
            k if k > 0 => self.entries[k as usize - 1],
            k => self.entries[(-k) as usize - 1].conj(),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn l1(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest per-entry distance to `other` (orders must match).
    pub fn max_deviation(&self, other: &MomentVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Point masses on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    /// `(angle in [0, 2pi), weight)`.
    pub atoms: Vec<(f64, f64)>,
    /// Set when every weight is an integer multiple of `1/N`.
    pub integral_base: Option<usize>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, integral_base: Option<usize>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {total}, not 1"
            )));
        }
        if let Some(n) = integral_base {
            for &(_, w) in &atoms {
                let c = w * n as f64;
                if (c - c.round()).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "weight {w} is not a multiple of 1/{n}"
                    )));
                }
            }
        }
        Ok(Self {
            atoms,
            integral_base,
        })
    }

    /// Moments `sum_j w_j e^{i k angle_j}` for `k = 1..=t`.
    pub fn moments(&self, t: usize) -> MomentVector {
        MomentVector::new(
            (1..=t)
                .map(|k| {
                    self.atoms
                        .iter()
                        .map(|&(a, w)| Complex64::from_polar(w, k as f64 * a))
                        .sum()
                })
                .collect(),
        )
    }

    /// Expand an `N`-integral measure into `N` angles (atoms repeated by count).
    pub fn to_angles(&self) -> Option<Vec<f64>> {
        let n = self.integral_base?;
        let mut out = Vec::with_capacity(n);
        for &(a, w) in &self.atoms {
            let c = (w * n as f64).round() as usize;
            out.extend(std::iter::repeat_n(a, c));
        }
        Some(out)
    }
}

/// Empirical moments `(1/N) sum_l e^{i k theta_l}` for `k = 1..=t`.
pub fn empirical_moments(angles: &[f64], t: usize) -> MomentVector {
    let n = angles.len() as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); t];
    for &a in angles {
        let z = Complex64::from_polar(1.0, a);
        let mut p = z;
        for slot in acc.iter_mut() {
            *slot += p;
            p *= z;
        }
    }
    MomentVector::new(acc.into_iter().map(|s| s / n).collect())
}

/// `(T+1) x (T+1)` Toeplitz matrix with entry `(j, k) = alpha_{k-j}`.
pub fn toeplitz_moment_matrix(alpha: &MomentVector) -> HermitianMatrix {
    HermitianMatrix::new(
        ComplexMatrix::new(toeplitz(alpha, alpha.order())).expect("finite moments"),
    )
    .expect("Toeplitz matrix is Hermitian by construction")
}

/// Leading `(r+1) x (r+1)` block of the Toeplitz matrix.
pub(crate) fn toeplitz(alpha: &MomentVector, r: usize) -> Mat<Complex64> {
    Mat::from_fn(r + 1, r + 1, |j, k| alpha.get(k as isize - j as isize))
}

/// Smallest eigenvalue of the Toeplitz matrix; feasibility requires `>= -1e-10`.
pub fn toeplitz_min_eigenvalue(alpha: &MomentVector) -> Result<f64> {
    let ev = crate::matrixcore::herm_eigenvalues(&toeplitz_moment_matrix(alpha))?;
    Ok(ev[0])
}

/// Largest-remainder apportionment of `weights` (summing to about 1) into `n`
/// nonnegative integer counts; ties go to the lower index.
pub fn largest_remainder(weights: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let quotas: Vec<f64> = weights
        .iter()
        .map(|w| w.max(0.0) / total * n as f64)
        .collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let r = a.rem_euclid(two_pi);
    if r >= two_pi {
        0.0
    } else {
        r
    }
}

pub(crate) fn check_residual(
    got: &MomentVector,
    want: &MomentVector,
    bound: f64,
    what: &str,
) -> Result<f64> {
    let dev = got.max_deviation(want);
    if !(dev <= bound) {
        return Err(Error::numerical(
            got.order(),
            format!("{what}: verification residual {dev:.3e} exceeds {bound:.0e}"),
        ));
    }
    Ok(dev)
}
