//! `E_U btr[(U D1 U^dagger D2)^p]` exactly and by Monte Carlo.
//!
//! Expanding the trace and integrating the `2p` entries of `U` gives
//!
//! `E tr[(U A U^dagger B)^p] = sum_{s,t in S(p)} Wg(s t^-1, N) p_t(A) p_{s g}(B)`
//!
//! where `g` is the long cycle and `p_pi(A) = prod_{cycles c of pi} tr(A^|c|)`.
//! Only cycle types matter, so the double sum collapses to an exact rational
//! matrix `c[nu][rho]` over pairs of cycle types, contracted with power sums.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use faer::Mat;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::perm::{all_perms, compose, cycle_type, inverse, long_cycle};
use super::{partitions, rational_to_f64, weingarten, Partition};
use crate::ensembles::{sample_haar, DiagonalSpectrum};
use crate::matrixcore::{mul, trace_power_moments_with, MomentPath, UnitaryMatrix};
use crate::statlab::{par_map_indexed, ComplexStats};
use crate::{rng, Error, Result};

/// Largest supported moment order for the exact path.
pub const MAX_CONJUGATION_ORDER: usize = 6;

/// How many `(s, t)` pairs share each `(class of s t^-1, type of t, type of s g)`.
#[derive(Debug)]
pub struct ConjugationTable {
    pub p: usize,
    pub classes: Vec<Partition>,
    /// `(wg class, nu, rho, count)`, sorted.
    pub counts: Vec<(usize, usize, usize, u64)>,
}

fn conjugation_table(p: usize) -> Result<Arc<ConjugationTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ConjugationTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(&p) {
        return Ok(t.clone());
    }
    let classes = partitions(p)?;
    let index: HashMap<Partition, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let perms = all_perms(p);
    let gamma = long_cycle(p);
    let t_info: Vec<(usize, Vec<u8>)> = perms
        .iter()
        .map(|t| (index[&cycle_type(t)], inverse(t)))
        .collect();
    let mut counts: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for s in &perms {
        let rho = index[&cycle_type(&compose(s, &gamma))];
        for (nu, t_inv) in &t_info {
            let wg = index[&cycle_type(&compose(s, t_inv))];
            *counts.entry((wg, *nu, rho)).or_default() += 1;
        }
    }
    let mut counts: Vec<_> = counts
        .into_iter()
        .map(|((a, b, c), n)| (a, b, c, n))
        .collect();
    counts.sort_unstable();
    let table = Arc::new(ConjugationTable { p, classes, counts });
    cache
        .lock()
        .expect("cache poisoned")
        .insert(p, table.clone());
    Ok(table)
}

/// Exact `c[nu][rho]` with `E tr[(U A U^dagger B)^p] = sum c[nu][rho] p_nu(A) p_rho(B)`.
pub fn conjugation_coefficients(
    p: usize,
    n: u64,
) -> Result<(Vec<Partition>, Vec<Vec<BigRational>>)> {
    if !(1..=MAX_CONJUGATION_ORDER).contains(&p) {
        return Err(Error::Unsupported(format!(
            "exact conjugation moments need 1 <= p <= {MAX_CONJUGATION_ORDER}"
        )));
    }
    let table = conjugation_table(p)?;
    let k = table.classes.len();
    let wg: Vec<BigRational> = table
        .classes
        .iter()
        .map(|c| weingarten(c, n).map(|w| w.value))
        .collect::<Result<_>>()?;
    let mut c = vec![vec![BigRational::zero(); k]; k];
    for &(w, nu, rho, count) in &table.counts {
        c[nu][rho] += &wg[w] * BigRational::from_integer(count.into());
    }
    Ok((table.classes.clone(), c))
}

/// `tr(D^j)` for `j = 1..=p`, summed in a canonical entry order so that any
/// relabelling of the diagonal gives bit-identical results.
fn power_sums(d: &DiagonalSpectrum, p: usize) -> Vec<Complex64> {
    let mut z = d.entries();
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    (1..=p)
        .map(|j| z.iter().map(|x| x.powu(j as u32)).sum())
        .collect()
}

fn product_power_sum(ps: &[Complex64], nu: &Partition) -> Complex64 {
    nu.parts().iter().map(|&l| ps[l - 1]).product()
}

fn check_inputs(d1: &DiagonalSpectrum, d2: &DiagonalSpectrum) -> Result<usize> {
    if d1.dim() != d2.dim() || d1.dim() == 0 {
        return Err(Error::InvalidArgument(format!(
            "diagonal sizes differ: {} vs {}",
            d1.dim(),
            d2.dim()
        )));
    }
    Ok(d1.dim())
}

/// `E_U btr[(U D1 U^dagger D2)^p]` over Haar `U`, exactly up to the final float contraction.
pub fn haar_conjugation_moment_exact(
    d1: &DiagonalSpectrum,
    d2: &DiagonalSpectrum,
    p: usize,
    n: usize,
) -> Result<Complex64> {
    let dim = check_inputs(d1, d2)?;
    if dim != n {
        return Err(Error::InvalidArgument(format!(
            "N = {n} does not match the diagonal size {dim}"
        )));
    }
    if n < p {
        return Err(Error::Unsupported(format!("N = {n} < p = {p}")));
    }
    let (classes, c) = conjugation_coefficients(p, n as u64)?;
    let pa = power_sums(d1, p);
    let pb = power_sums(d2, p);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, nu) in classes.iter().enumerate() {
        let a = product_power_sum(&pa, nu);
        for (j, rho) in classes.iter().enumerate() {
            if c[i][j].is_zero() {
                continue;
            }
            acc += a * product_power_sum(&pb, rho) * rational_to_f64(&c[i][j]);
        }
    }
    Ok(acc / n as f64)
}

/// Monte-Carlo mean and standard error of `btr[(U D1 U^dagger D2)^p]`.
pub fn haar_conjugation_moment_mc(
    d1: &DiagonalSpectrum,
    d2: &DiagonalSpectrum,
    p: usize,
    samples: usize,
    seed: u64,
) -> Result<(Complex64, f64)> {
    let n = check_inputs(d1, d2)?;
    if p == 0 || samples < 2 {
        return Err(Error::InvalidArgument(
            "need p >= 1 and at least two samples".into(),
        ));
    }
    let e1 = d1.entries();
    let e2 = d2.entries();
    let values = par_map_indexed(samples, |i| {
        let u = sample_haar(n, &mut rng::stream(seed, "weingarten/mc", i as u64));
        let um = u.as_mat();
        let ud = Mat::from_fn(n, n, |r, c| um[(r, c)] * e1[c]);
        let conj = mul(&ud, &um.adjoint().to_owned());
        let x = Mat::from_fn(n, n, |r, c| conj[(r, c)] * e2[c]);
        let m =
            trace_power_moments_with(&UnitaryMatrix::from_trusted(x), p, MomentPath::MatrixPowers)?;
        Ok(m.get(p as isize))
    })?;
    let stats = ComplexStats::from_values(&values);
    Ok((stats.mean(), stats.stderr()))
}
