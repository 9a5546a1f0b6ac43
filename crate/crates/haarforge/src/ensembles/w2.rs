use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    random_local_circuit, sample_haar, semicircle_diagonal, sum_hamiltonian, DiagonalSpectrum,
    MAX_QUBITS,
};
use crate::khash::{hashed_seed_stream, sample_hash};
use crate::matrixcore::{unitary_exp, HermitianMatrix, UnitaryMatrix};
use crate::ratmarkov::calibrate_theta;
use crate::{rng, Error, Result};

/// How the conjugating bases of the random sums are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    #[default]
    Haar,
    /// Independent random local circuits.
    Circuit,
    /// Local circuits seeded through one k-wise independent hash per Hamiltonian.
    HashedCircuit,
}

/// Either an explicit angle or the index of a calibrated one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaChoice {
    Value(f64),
    Calibrated { calibrated: usize },
}

impl ThetaChoice {
    pub fn resolve(self) -> Result<(f64, Option<usize>)> {
        match self {
            ThetaChoice::Value(t) if t.is_finite() => Ok((t, None)),
            ThetaChoice::Value(t) => Err(Error::InvalidConfig(format!(
                "theta must be finite, got {t}"
            ))),
            ThetaChoice::Calibrated { calibrated } => {
                Ok((calibrate_theta(calibrated)?, Some(calibrated)))
            }
        }
    }
}

fn default_hash_order() -> usize {
    4
}

/// Parameters of the product ensemble `W2 = e^{i theta H} e^{i theta H'}`,
/// `H = (1/sqrt m) sum_j U_j D U_j^dagger` with `D` the semicircle diagonal of order `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    /// Number of summands `m` per Hamiltonian.
    pub m: usize,
    /// Semicircle moment-match order.
    pub q: usize,
    /// Resolved angle.
    pub theta: f64,
    /// Set when `theta` is the `k`-th calibrated value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_index: Option<usize>,
    #[serde(default)]
    pub basis: BasisKind,
    #[serde(default)]
    pub circuit_length: usize,
    /// Independence order of the seed hash (hashed circuits only).
    #[serde(default = "default_hash_order")]
    pub hash_order: usize,
    pub seed: u64,
}

/// User-facing form of [`EnsembleSpec`]: `dim` or `n_qubits`, and a theta choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub n_qubits: Option<u32>,
    pub m: usize,
    pub q: usize,
    pub theta: ThetaChoice,
    #[serde(default)]
    pub basis: BasisKind,
    #[serde(default)]
    pub circuit_length: usize,
    #[serde(default = "default_hash_order")]
    pub hash_order: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl EnsembleConfig {
    pub fn resolve(&self, default_seed: u64) -> Result<EnsembleSpec> {
        let dim = match (self.dim, self.n_qubits) {
            (Some(d), None) => d,
            (None, Some(n)) if n <= MAX_QUBITS => 1usize << n,
            (None, Some(n)) => {
                return Err(Error::InvalidConfig(format!(
                    "n_qubits {n} exceeds {MAX_QUBITS}"
                )))
            }
            (Some(d), Some(n)) if n <= MAX_QUBITS && d == 1usize << n => d,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig("dim and n_qubits disagree".into()))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "ensemble needs dim or n_qubits".into(),
                ))
            }
        };
        let (theta, theta_index) = self.theta.resolve()?;
        let spec = EnsembleSpec {
            dim,
            m: self.m,
            q: self.q,
            theta,
            theta_index,
            basis: self.basis,
            circuit_length: self.circuit_length,
            hash_order: self.hash_order,
            seed: self.seed.unwrap_or(default_seed),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl EnsembleSpec {
    /// Haar-basis spec with an explicit angle.
    pub fn haar(dim: usize, m: usize, q: usize, theta: f64, seed: u64) -> Self {
        Self {
            dim,
            m,
            q,
            theta,
            theta_index: None,
            basis: BasisKind::Haar,
            circuit_length: 0,
            hash_order: default_hash_order(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.q < 1 || self.dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "ensemble needs m >= 1, q >= 1, N >= 2 (got m={}, q={}, N={})",
                self.m, self.q, self.dim
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidConfig("theta must be finite".into()));
        }
        if self.basis != BasisKind::Haar {
            self.n_qubits()?;
            if self.basis == BasisKind::HashedCircuit && self.hash_order < 1 {
                return Err(Error::InvalidConfig("hash_order must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// `n` with `dim = 2^n`, required for circuit bases.
    pub fn n_qubits(&self) -> Result<u32> {
        if !self.dim.is_power_of_two() || self.dim.trailing_zeros() > MAX_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "circuit bases need dim = 2^n with n <= {MAX_QUBITS}, got {}",
                self.dim
            )));
        }
        Ok(self.dim.trailing_zeros())
    }

    /// Input width of the seed hash: enough bits to index `m` summands.
    pub fn hash_input_bits(&self) -> u32 {
        (usize::BITS - (self.m.max(2) - 1).leading_zeros()).max(1)
    }

    /// The `m` conjugating bases for one Hamiltonian of sample `index`.
    pub fn bases(&self, side: &str, index: u64) -> Result<Vec<UnitaryMatrix>> {
        match self.basis {
            BasisKind::Haar => {
                let mut r = rng::stream(self.seed, &format!("ensembles/w2/{side}"), index);
                Ok((0..self.m).map(|_| sample_haar(self.dim, &mut r)).collect())
            }
            BasisKind::Circuit => {
                let nq = self.n_qubits()?;
                let mut r = rng::stream(self.seed, &format!("ensembles/w2/{side}"), index);
                (0..self.m)
                    .map(|_| random_local_circuit(nq, self.circuit_length, r.random()))
                    .collect()
            }
            BasisKind::HashedCircuit => {
                let nq = self.n_qubits()?;
                let mut r = rng::stream(self.seed, &format!("khash/w2/{side}"), index);
                let h = sample_hash(self.hash_order, self.hash_input_bits(), 64, &mut r)?;
                (0..self.m)
                    .map(|j| {
                        random_local_circuit(
                            nq,
                            self.circuit_length,
                            hashed_seed_stream(&h, j as u64)?,
                        )
                    })
                    .collect()
            }
        }
    }

    /// `H` for one side of sample `index`.
    pub fn hamiltonian(
        &self,
        d: &DiagonalSpectrum,
        side: &str,
        index: u64,
    ) -> Result<HermitianMatrix> {
        sum_hamiltonian(d, &self.bases(side, index)?)
    }
}

/// Sample `index` of the product ensemble described by `spec`.
pub fn sample_w2(spec: &EnsembleSpec, index: u64) -> Result<UnitaryMatrix> {
    spec.validate()?;
    let d = semicircle_diagonal(spec.dim, spec.q)?;
    let left = unitary_exp(&spec.hamiltonian(&d, "left", index)?, spec.theta)?;
    let right = unitary_exp(&spec.hamiltonian(&d, "right", index)?, spec.theta)?;
    left.compose(&right)
}
