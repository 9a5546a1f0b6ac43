//! Dense complex linear algebra on top of `faer`.
//!
//! Three newtypes share one storage type and differ only in the invariant
//! checked at construction: [`ComplexMatrix`] (finite), [`HermitianMatrix`]
//! and [`UnitaryMatrix`].

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par, Side};
use num_complex::Complex64;

use crate::momentproblem::MomentVector;
use crate::{tol, Error, Result};

/// Square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(Mat<Complex64>);

impl ComplexMatrix {
    pub fn new(m: Mat<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "non-finite entry at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(Mat::from_fn(n, n, f))
    }

    /// Build from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "rows must form a square matrix".into(),
            ));
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        Self(Mat::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.0
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint().to_owned())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self(mul(&self.0, &rhs.0)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.0[(i, i)]).sum()
    }

    /// Normalized trace `tr(M)/N`.
    pub fn btr(&self) -> Complex64 {
        self.trace() / self.dim() as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm_l2()
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (&self.0 - &other.0).norm_l2()
    }

    /// `||M - M^dagger||_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm_l2()
    }

    /// `||M M^dagger - I||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let mut p = mul(&self.0, &self.0.adjoint().to_owned());
        for i in 0..n {
            p[(i, i)] -= Complex64::new(1.0, 0.0);
        }
        p.norm_l2()
    }
}

/// Hermitian matrix, `||M - M^dagger||_F <= 1e-10 max(1, ||M||_F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let r = m.hermiticity_residual();
        if r > tol::HERMITIAN * m.frobenius_norm().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (residual {r:.3e})"
            )));
        }
        Ok(Self(m))
    }

    /// `(M + M^dagger)/2`, Hermitian by construction.
    pub fn symmetrized(m: &Mat<Complex64>) -> Self {
        let h = Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        });
        Self(ComplexMatrix(h))
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let d: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self(ComplexMatrix::diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        self.0.as_mat()
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }
}

/// Unitary matrix, `||M M^dagger - I||_F <= 1e-8 sqrt(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let r = m.unitarity_residual();
        if r > tol::UNITARY * (m.dim() as f64).sqrt() {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (residual {r:.3e})"
            )));
        }
        Ok(Self(m))
    }

    /// Wrap a matrix that is unitary by construction (products, exponentials, QR factors).
    pub(crate) fn from_trusted(m: Mat<Complex64>) -> Self {
        let u = Self(ComplexMatrix(m));
        debug_assert!(u.0.unitarity_residual() <= tol::UNITARY * (u.dim() as f64).sqrt());
        u
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// Diagonal unitary `diag(e^{i angle_j})`.
    pub fn from_phases(angles: &[f64]) -> Self {
        let d: Vec<Complex64> = angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect();
        Self(ComplexMatrix::diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        self.0.as_mat()
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Product of two unitaries.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self::from_trusted(mul(self.as_mat(), rhs.as_mat())))
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.0.unitarity_residual()
    }
}

/// Eigenvalues ascending, eigenvectors as the columns of a unitary.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: UnitaryMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> Mat<Complex64> {
        let v = self.eigenvectors.as_mat();
        let n = v.nrows();
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let vf = Mat::from_fn(n, n, |i, j| v[(i, j)] * fl[j]);
        mul(&vf, &v.adjoint().to_owned())
    }

    /// `||V Lambda V^dagger - H||_F`.
    pub fn reconstruction_residual(&self, h: &HermitianMatrix) -> f64 {
        let r = self.apply_function(|l| Complex64::new(l, 0.0));
        (&r - h.as_mat()).norm_l2()
    }
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {a} vs {b}"
        )));
    }
    Ok(())
}

/// Sequential dense product. Parallelism lives one level up (across samples).
pub(crate) fn mul(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Mat<Complex64> {
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a.as_ref(),
        b.as_ref(),
        Complex64::new(1.0, 0.0),
        Par::Seq,
    );
    out
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_of_product(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// Hermitian eigendecomposition with a deterministic eigenvector gauge.
///
/// Each eigenvector is rotated so its first non-negligible component is real
/// and positive; vectors inside a degenerate cluster (gap `<= 1e-12`) are then
/// ordered lexicographically by their components.
pub fn herm_eig(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let evd = h
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numerical(n, format!("eigensolver did not converge: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let mut vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col: Vec<Complex64> = (0..n).map(|i| u[(i, j)]).collect();
            canonicalize_phase(&mut col);
            col
        })
        .collect();
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::numerical(n, "non-finite eigenvalue"));
    }

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= tol::EIG_DEGENERATE {
            end += 1;
        }
        if end - start > 1 {
            let mut idx: Vec<usize> = (start..end).collect();
            idx.sort_by(|&a, &b| lex_cmp(&vectors[a], &vectors[b]));
            let vs: Vec<_> = idx.iter().map(|&k| vectors[k].clone()).collect();
            let ls: Vec<_> = idx.iter().map(|&k| eigenvalues[k]).collect();
            for (off, (v, l)) in vs.into_iter().zip(ls).enumerate() {
                vectors[start + off] = v;
                eigenvalues[start + off] = l;
            }
        }
        start = end;
    }

    let v = Mat::from_fn(n, n, |i, j| vectors[j][i]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: UnitaryMatrix(ComplexMatrix(v)),
    })
}

fn canonicalize_phase(v: &mut [Complex64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(z) = v
        .iter()
        .find(|z| z.norm() > 1e-8 * scale.max(f64::MIN_POSITIVE))
    {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// `e^{i theta H}` through the spectral factorization. Exactly `I` at `theta = 0`.
pub fn unitary_exp(h: &HermitianMatrix, theta: f64) -> Result<UnitaryMatrix> {
    if theta == 0.0 {
        return Ok(UnitaryMatrix::identity(h.dim()));
    }
    let eig = herm_eig(h)?;
    Ok(unitary_exp_from_eig(&eig, theta))
}

/// `e^{i theta H}` from a precomputed decomposition of `H`.
pub fn unitary_exp_from_eig(eig: &EigenDecomposition, theta: f64) -> UnitaryMatrix {
    UnitaryMatrix::from_trusted(eig.apply_function(|l| Complex64::from_polar(1.0, theta * l)))
}

/// How [`trace_power_moments_with`] evaluates `tr(U^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentPath {
    /// Powers up to `ceil(T/2)`, higher traces as `tr(U^a U^b)`.
    MatrixPowers,
    /// Eigenvalues of `U` (complex Schur form).
    Eigenphases,
}

/// `alpha_k = tr(U^k)/N` for `k = 1..=t`.
pub fn trace_power_moments(u: &UnitaryMatrix, t: usize) -> Result<MomentVector> {
    let path = if t <= 16 {
        MomentPath::MatrixPowers
    } else {
        MomentPath::Eigenphases
    };
    trace_power_moments_with(u, t, path)
}

pub fn trace_power_moments_with(
    u: &UnitaryMatrix,
    t: usize,
    path: MomentPath,
) -> Result<MomentVector> {
    let n = u.dim();
    if t == 0 || t > 4 * n {
        return Err(Error::InvalidArgument(format!(
            "moment order {t} outside 1..={}",
            4 * n
        )));
    }
    let nf = n as f64;
    let values = match path {
        MomentPath::MatrixPowers => {
            let half = t.div_ceil(2);
            let mut powers = vec![u.as_mat().clone()];
            for _ in 1..half {
                let next = mul(powers.last().unwrap(), u.as_mat());
                powers.push(next);
            }
            (1..=t)
                .map(|k| {
                    if k <= half {
                        ComplexMatrix(powers[k - 1].clone()).trace() / nf
                    } else {
                        trace_of_product(&powers[half - 1], &powers[k - half - 1]) / nf
                    }
                })
                .collect()
        }
        MomentPath::Eigenphases => {
            let ev = u
                .as_mat()
                .eigenvalues()
                .map_err(|e| Error::numerical(n, format!("eigenvalue solver failed: {e:?}")))?;
            // Unitary input: project onto the circle before powering.
            let phases: Vec<Complex64> = ev.iter().map(|z| z / z.norm()).collect();
            let mut acc = phases.clone();
            let mut out = Vec::with_capacity(t);
            for k in 1..=t {
                if k > 1 {
                    for (a, z) in acc.iter_mut().zip(&phases) {
                        *a *= z;
                    }
                }
                out.push(acc.iter().sum::<Complex64>() / nf);
            }
            out
        }
    };
    Ok(MomentVector::new(values))
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let sv = m
        .as_mat()
        .singular_values()
        .map_err(|e| Error::numerical(m.dim(), format!("svd failed: {e:?}")))?;
    Ok(sv.first().copied().unwrap_or(0.0))
}

/// `max |lambda|` for Hermitian input, cheaper than an SVD.
pub fn hermitian_spectral_radius(h: &HermitianMatrix) -> Result<f64> {
    let ev = h
        .as_mat()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::numerical(h.dim(), format!("eigensolver did not converge: {e:?}")))?;
    Ok(ev.iter().fold(0.0f64, |a, l| a.max(l.abs())))
}

/// Ascending eigenvalues only.
pub fn herm_eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    h.as_mat()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::numerical(h.dim(), format!("eigensolver did not converge: {e:?}")))
}

/// Normalized traces `btr(H^k)` for `k = 1..=kmax` of a Hermitian matrix.
pub fn hermitian_trace_moments(h: &HermitianMatrix, kmax: usize) -> Vec<f64> {
    let n = h.dim() as f64;
    let half = kmax.div_ceil(2).max(1);
    let mut powers = vec![h.as_mat().clone()];
    for _ in 1..half {
        let next = mul(powers.last().unwrap(), h.as_mat());
        powers.push(next);
    }
    (1..=kmax)
        .map(|k| {
            let z = if k <= half {
                ComplexMatrix(powers[k - 1].clone()).trace()
            } else {
                trace_of_product(&powers[half - 1], &powers[k - half - 1])
            };
            z.re / n
        })
        .collect()
}
