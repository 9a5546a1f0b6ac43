//! Index-addressed samplers used by the Monte-Carlo layer.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::{
    compose_boost, random_local_circuit, sample_gue, sample_haar, sample_w2, EnsembleSpec,
};
use crate::matrixcore::{herm_eigenvalues, trace_power_moments, unitary_exp, UnitaryMatrix};
use crate::momentproblem::MomentVector;
use crate::{rng, Error, Result};

/// An ensemble whose `index`-th draw is a pure function of `(seed, index)`.
pub trait UnitarySampler: Send + Sync {
    fn dim(&self) -> usize;

    fn sample(&self, index: u64) -> Result<UnitaryMatrix>;

    /// `btr(U^p)` for `p = 1..=p_max` of draw `index`.
    fn moments(&self, index: u64, p_max: usize) -> Result<MomentVector> {
        trace_power_moments(&self.sample(index)?, p_max)
    }

    fn label(&self) -> String;
}

#[derive(Clone, Debug)]
pub struct HaarSampler {
    pub dim: usize,
    pub seed: u64,
}

impl UnitarySampler for HaarSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        Ok(sample_haar(
            self.dim,
            &mut rng::stream(self.seed, "ensembles/haar", index),
        ))
    }

    fn label(&self) -> String {
        format!("haar(N={})", self.dim)
    }
}

/// `e^{i theta G}` with `G` from the GUE.
#[derive(Clone, Debug)]
pub struct GueExpSampler {
    pub dim: usize,
    pub theta: f64,
    pub seed: u64,
}

impl UnitarySampler for GueExpSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        let g = sample_gue(
            self.dim,
            &mut rng::stream(self.seed, "ensembles/gue_exp", index),
        );
        unitary_exp(&g, self.theta)
    }

    /// Spectral shortcut: the moments only need the eigenvalues of `G`.
    fn moments(&self, index: u64, p_max: usize) -> Result<MomentVector> {
        let g = sample_gue(
            self.dim,
            &mut rng::stream(self.seed, "ensembles/gue_exp", index),
        );
        let ev = herm_eigenvalues(&g)?;
        let n = self.dim as f64;
        Ok(MomentVector::new(
            (1..=p_max)
                .map(|p| {
                    ev.iter()
                        .map(|&l| Complex64::from_polar(1.0, p as f64 * self.theta * l))
                        .sum::<Complex64>()
                        / n
                })
                .collect(),
        ))
    }

    fn label(&self) -> String {
        format!("gue_exp(N={}, theta={})", self.dim, self.theta)
    }
}

/// `e^{i theta G} e^{i theta G'}` with independent GUE matrices.
#[derive(Clone, Debug)]
pub struct GueProductSampler {
    pub dim: usize,
    pub theta: f64,
    pub seed: u64,
}

impl UnitarySampler for GueProductSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        let g = sample_gue(
            self.dim,
            &mut rng::stream(self.seed, "ensembles/gue_product/left", index),
        );
        let h = sample_gue(
            self.dim,
            &mut rng::stream(self.seed, "ensembles/gue_product/right", index),
        );
        unitary_exp(&g, self.theta)?.compose(&unitary_exp(&h, self.theta)?)
    }

    fn label(&self) -> String {
        format!("gue_product(N={}, theta={})", self.dim, self.theta)
    }
}

#[derive(Clone, Debug)]
pub struct W2Sampler {
    pub spec: EnsembleSpec,
}

impl UnitarySampler for W2Sampler {
    fn dim(&self) -> usize {
        self.spec.dim
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        sample_w2(&self.spec, index)
    }

    fn label(&self) -> String {
        format!(
            "w2(N={}, m={}, q={}, basis={:?})",
            self.spec.dim, self.spec.m, self.spec.q, self.spec.basis
        )
    }
}

#[derive(Clone, Debug)]
pub struct CircuitSampler {
    pub n_qubits: u32,
    pub length: usize,
    pub seed: u64,
}

impl UnitarySampler for CircuitSampler {
    fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        let material: u64 = rng::stream(self.seed, "ensembles/circuit_sampler", index).random();
        random_local_circuit(self.n_qubits, self.length, material)
    }

    fn label(&self) -> String {
        format!("circuit(n={}, length={})", self.n_qubits, self.length)
    }
}

/// Product of `k` consecutive draws of `inner`: draw `i` uses inner indices `k i .. k i + k`.
#[derive(Clone)]
pub struct BoostedSampler {
    pub inner: Arc<dyn UnitarySampler>,
    pub k: usize,
}

impl UnitarySampler for BoostedSampler {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("boost order must be >= 1".into()));
        }
        let k = self.k as u64;
        let draws = (0..k)
            .map(|i| self.inner.sample(index * k + i))
            .collect::<Result<Vec<_>>>()?;
        compose_boost(&draws)
    }

    fn label(&self) -> String {
        format!("boost(k={}, {})", self.k, self.inner.label())
    }
}

/// `V U` for a fixed `V`; used to probe left invariance.
#[derive(Clone)]
pub struct LeftMultiplied {
    pub v: UnitaryMatrix,
    pub inner: Arc<dyn UnitarySampler>,
}

impl UnitarySampler for LeftMultiplied {
    fn dim(&self) -> usize {
        self.v.dim()
    }

    fn sample(&self, index: u64) -> Result<UnitaryMatrix> {
        self.v.compose(&self.inner.sample(index)?)
    }

    fn label(&self) -> String {
        format!("left_multiplied({})", self.inner.label())
    }
}
