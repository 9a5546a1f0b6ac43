//! Dense simulation of random nearest-neighbour circuits over a discrete gate set.

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;

use crate::matrixcore::UnitaryMatrix;
use crate::rng;
use crate::{Error, Result};

/// Largest register simulated densely.
pub const MAX_QUBITS: u32 = 10;

/// Gates on the adjacent pair `(a, a+1)`; qubit `a` is bit `n-1-a` of the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Hadamard on the first qubit of the pair.
    HI,
    /// Hadamard on the second qubit.
    IH,
    /// `T = diag(1, e^{i pi/4})` on the first qubit.
    TI,
    /// `T` on the second qubit.
    IT,
    /// CNOT, control first, target second.
    Cnot,
}

const PAIR_GATES: [Gate; 5] = [Gate::HI, Gate::IH, Gate::TI, Gate::IT, Gate::Cnot];
const SINGLE_GATES: [Gate; 2] = [Gate::HI, Gate::TI];

/// Row-major dense state of the circuit unitary, updated gate by gate.
struct Register {
    n: usize,
    rows: Vec<Complex64>,
}

impl Register {
    fn identity(n: usize) -> Self {
        let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            rows[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, rows }
    }

    fn hadamard(&mut self, bit: usize) {
        let n = self.n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in (0..n).filter(|i| i & (1 << bit) == 0) {
            let j = i | (1 << bit);
            for c in 0..n {
                let a = self.rows[i * n + c];
                let b = self.rows[j * n + c];
                self.rows[i * n + c] = (a + b) * s;
                self.rows[j * n + c] = (a - b) * s;
            }
        }
    }

    fn t_gate(&mut self, bit: usize) {
        let n = self.n;
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        for i in (0..n).filter(|i| i & (1 << bit) != 0) {
            for c in 0..n {
                self.rows[i * n + c] *= phase;
            }
        }
    }

    fn cnot(&mut self, control: usize, target: usize) {
        let n = self.n;
        for i in (0..n).filter(|i| i & (1 << control) != 0 && i & (1 << target) == 0) {
            let j = i | (1 << target);
            for c in 0..n {
                self.rows.swap(i * n + c, j * n + c);
            }
        }
    }
}

/// Product of `length` random gates as a dense `2^n x 2^n` unitary, fully
/// determined by `seed_material`. Each step picks an adjacent pair uniformly
/// (a single qubit when `n = 1`) and a gate uniformly from the set.
pub fn random_local_circuit(
    n_qubits: u32,
    length: usize,
    seed_material: u64,
) -> Result<UnitaryMatrix> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidConfig(format!(
            "circuits support 1..={MAX_QUBITS} qubits, got {n_qubits}"
        )));
    }
    let nq = n_qubits as usize;
    let dim = 1usize << nq;
    let mut reg = Register::identity(dim);
    let mut rng = rng::stream(seed_material, "ensembles/circuit", 0);
    let bit = |q: usize| nq - 1 - q;
    for _ in 0..length {
        let (a, gate) = if nq == 1 {
            (0, SINGLE_GATES[rng.random_range(0..SINGLE_GATES.len())])
        } else {
            (
                rng.random_range(0..nq - 1),
                PAIR_GATES[rng.random_range(0..PAIR_GATES.len())],
            )
        };
        match gate {
            Gate::HI => reg.hadamard(bit(a)),
            Gate::IH => reg.hadamard(bit(a + 1)),
            Gate::TI => reg.t_gate(bit(a)),
            Gate::IT => reg.t_gate(bit(a + 1)),
            Gate::Cnot => reg.cnot(bit(a), bit(a + 1)),
        }
    }
    let rows = reg.rows;
    Ok(UnitaryMatrix::from_trusted(Mat::from_fn(
        dim,
        dim,
        |i, j| rows[i * dim + j],
    )))
}
