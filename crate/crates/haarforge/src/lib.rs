//! Random-sum constructions of approximate unitary designs, checked numerically.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrixcore`] dense complex linear algebra (eigendecomposition, unitary
//!   exponentials, trace moments).
//! * [`ensembles`] GUE, Haar, semicircle diagonals, random-sum Hamiltonians,
//!   the product ensemble `W2`, toy local circuits and boosting.
//! * [`momentproblem`] the unitary moment problem: Toeplitz feasibility,
//!   atomic decompositions and equal-weight angle solvers.
//! * [`weingarten`] exact symmetric-group characters and Weingarten values.
//! * [`ratmarkov`] Bessel `J1`, theta calibration and the rational Markov toolkit.
//! * [`statlab`] Monte-Carlo estimators, Haar references, frame potentials.
//! * [`khash`] k-wise independent polynomial hashing over `GF(2^w)`.
//! * [`cli`] the batch experiment driver behind the `haarforge` binary.
//!
//! Randomness is counter based: every sample is drawn from a stream keyed by
//! `(master seed, tag, index)` (see [`rng`]), so results do not depend on the
//! number of worker threads.

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ensembles;
pub mod error;
pub mod khash;
pub mod matrixcore;
pub mod momentproblem;
pub mod ratmarkov;
pub mod rng;
pub mod statlab;
pub mod tol;
pub mod weingarten;

pub use error::{Error, Result};
pub use num_complex::Complex64;
