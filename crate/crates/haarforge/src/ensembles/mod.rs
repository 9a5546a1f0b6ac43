//! Random unitary and Hermitian ensembles.
//!
//! All samplers take an explicit [`Stream`](crate::rng::Stream); the
//! [`UnitarySampler`] implementations derive one stream per sample index so
//! any draw can be regenerated on its own.

mod circuit;
mod sampler;
mod semicircle;
mod w2;

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::matrixcore::{check_dims, mul, HermitianMatrix, UnitaryMatrix};
use crate::rng::Stream;
use crate::{Error, Result};

pub use circuit::{random_local_circuit, Gate, MAX_QUBITS};
pub use sampler::{
    BoostedSampler, CircuitSampler, GueExpSampler, GueProductSampler, HaarSampler, LeftMultiplied,
    UnitarySampler, W2Sampler,
};
pub use semicircle::{semicircle_diagonal, semicircle_moment};
pub use w2::{sample_w2, BasisKind, EnsembleConfig, EnsembleSpec, ThetaChoice};

/// Diagonal of a Hermitian (`Real`) or unitary (`Phase`) matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSpectrum {
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Real,
    Phase,
}

impl DiagonalSpectrum {
    pub fn real(values: Vec<f64>) -> Self {
        Self {
            values,
            kind: SpectrumKind::Real,
        }
    }

    pub fn phase(values: Vec<f64>) -> Self {
        Self {
            values,
            kind: SpectrumKind::Phase,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Diagonal entries as complex numbers (`e^{i v}` for phases).
    pub fn entries(&self) -> Vec<Complex64> {
        match self.kind {
            SpectrumKind::Real => self
                .values
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
            SpectrumKind::Phase => self
                .values
                .iter()
                .map(|&v| Complex64::from_polar(1.0, v))
                .collect(),
        }
    }

    /// `btr(D^k)`.
    pub fn normalized_power_trace(&self, k: u32) -> Complex64 {
        let n = self.dim() as f64;
        self.entries().iter().map(|z| z.powu(k)).sum::<Complex64>() / n
    }
}

fn complex_gaussian(rng: &mut Stream, scale: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// GUE matrix: off-diagonal `(g + i g')/sqrt(2N)`, diagonal `g/sqrt(N)`.
pub fn sample_gue(n: usize, rng: &mut Stream) -> HermitianMatrix {
    let nf = n as f64;
    let off = (2.0 * nf).sqrt().recip();
    let diag = nf.sqrt().recip();
    let mut m = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        let g: f64 = rng.sample(StandardNormal);
        m[(j, j)] = Complex64::new(g * diag, 0.0);
        for i in (j + 1)..n {
            let z = complex_gaussian(rng, off);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::symmetrized(&m)
}

/// Haar unitary: QR of a complex Ginibre matrix, with column `j` of `Q`
/// multiplied by the phase of `R_jj` so the law does not depend on the QR
/// sign convention.
pub fn sample_haar(n: usize, rng: &mut Stream) -> UnitaryMatrix {
    let z = Mat::from_fn(n, n, |_, _| {
        complex_gaussian(rng, std::f64::consts::FRAC_1_SQRT_2)
    });
    let qr = z.qr();
    let r = qr.R();
    let q = qr.compute_Q();
    let phases: Vec<Complex64> = (0..n)
        .map(|j| {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    UnitaryMatrix::from_trusted(Mat::from_fn(n, n, |i, j| q[(i, j)] * phases[j]))
}

/// `(1/sqrt(m)) sum_j U_j D U_j^dagger` for real `D`.
pub fn sum_hamiltonian(d: &DiagonalSpectrum, bases: &[UnitaryMatrix]) -> Result<HermitianMatrix> {
    if bases.is_empty() {
        return Err(Error::InvalidArgument("need at least one basis".into()));
    }
    if d.kind != SpectrumKind::Real {
        return Err(Error::InvalidArgument(
            "sum_hamiltonian needs a real spectrum".into(),
        ));
    }
    let n = d.dim();
    let mut acc = Mat::<Complex64>::zeros(n, n);
    for u in bases {
        check_dims(u.dim(), n)?;
        let um = u.as_mat();
        let ud = Mat::from_fn(n, n, |i, j| um[(i, j)] * d.values[j]);
        acc += mul(&ud, &um.adjoint().to_owned());
    }
    acc *= faer::Scale(Complex64::new((bases.len() as f64).sqrt().recip(), 0.0));
    Ok(HermitianMatrix::symmetrized(&acc))
}

/// Product `U_1 U_2 ... U_k` of independent draws.
pub fn compose_boost(samples: &[UnitaryMatrix]) -> Result<UnitaryMatrix> {
    let (first, rest) = samples
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("compose_boost needs at least one sample".into()))?;
    let mut acc = first.clone();
    for u in rest {
        acc = acc.compose(u)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::herm_eigenvalues;
    use crate::rng::stream;

    #[test]
    fn gue_is_hermitian_and_scaled() {
        let g = sample_gue(8, &mut stream(1, "t", 0));
        assert_eq!(g.matrix().hermiticity_residual(), 0.0);
        let big = sample_gue(200, &mut stream(1, "t", 1));
        let m2 = crate::matrixcore::hermitian_trace_moments(&big, 2)[1];
        assert!((m2 - 1.0).abs() < 0.05, "{m2}");
    }

    #[test]
    fn haar_is_unitary() {
        let u = sample_haar(32, &mut stream(2, "t", 0));
        assert!(u.unitarity_residual() < 1e-12);
    }

    #[test]
    fn single_summand_keeps_spectrum() {
        let d = DiagonalSpectrum::real(vec![-1.5, 0.2, 0.2, 1.9, 0.7]);
        let u = sample_haar(5, &mut stream(3, "t", 0));
        let h = sum_hamiltonian(&d, std::slice::from_ref(&u)).unwrap();
        assert!(h.matrix().hermiticity_residual() <= 1e-12);
        let ev = herm_eigenvalues(&h).unwrap();
        let mut want = d.values.clone();
        want.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9);
        }
        let wrong = sample_haar(4, &mut stream(3, "t", 1));
        assert!(sum_hamiltonian(&d, &[wrong]).is_err());
    }

    #[test]
    fn boost_of_one_is_identity_map() {
        let u = sample_haar(6, &mut stream(4, "t", 0));
        let b = compose_boost(std::slice::from_ref(&u)).unwrap();
        assert_eq!(b, u);
        let v = sample_haar(6, &mut stream(4, "t", 1));
        let p = compose_boost(&[u.clone(), v.clone()]).unwrap();
        let want = u.matrix().matmul(v.matrix()).unwrap();
        assert!(p.matrix().distance(&want) < 1e-14);
        assert!(p.unitarity_residual() <= u.unitarity_residual() + v.unitarity_residual() + 1e-10);
        assert!(compose_boost(&[]).is_err());
    }
}
