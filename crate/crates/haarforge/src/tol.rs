//! Numerical tolerances shared by library checks and tests.

/// `||M - M^dagger||_F <= HERMITIAN * max(1, ||M||_F)`.
pub const HERMITIAN: f64 = 1e-10;
/// `||M M^dagger - I||_F <= UNITARY * sqrt(N)`.
pub const UNITARY: f64 = 1e-8;
/// Relative reconstruction error of an eigendecomposition.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate when ordering vectors.
pub const EIG_DEGENERATE: f64 = 1e-12;
/// Agreement of the two trace-moment paths.
pub const MOMENT_PATHS: f64 = 1e-9;
/// Spectrum match for single-summand random sums and operator-norm checks.
pub const SPECTRUM: f64 = 1e-9;
/// Atomic-measure moment residual.
pub const ATOMIC_RESIDUAL: f64 = 1e-10;
/// Smallest weight accepted from the atomic solver.
pub const ATOMIC_WEIGHT: f64 = -1e-12;
/// Toeplitz PSD slack.
pub const PSD: f64 = 1e-10;
/// Residual of a near-origin block solve.
pub const NEAR_ORIGIN_RESIDUAL: f64 = 1e-10;
/// End-to-end residual of the unitary moment solver.
pub const MOMENT_SOLVE_RESIDUAL: f64 = 1e-8;
/// Newton iteration cap.
pub const NEWTON_MAX_ITERS: usize = 100;
/// Step-halving cap per Newton iteration.
pub const NEWTON_MAX_HALVINGS: usize = 20;
/// Bessel absolute accuracy target.
pub const BESSEL: f64 = 1e-12;
/// Theta calibration accuracy.
pub const THETA: f64 = 1e-9;
/// Imaginary residue allowed when a real quantity is computed in complex arithmetic.
pub const REAL_PART: f64 = 1e-12;
/// Distance to a pole below which rational evaluations are refused.
pub const POLE: f64 = 1e-12;
/// Merge-vs-serial agreement for streaming statistics.
pub const STATS_MERGE: f64 = 1e-12;
