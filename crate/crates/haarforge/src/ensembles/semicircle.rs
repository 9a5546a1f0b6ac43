use super::DiagonalSpectrum;
use crate::momentproblem::largest_remainder;
use crate::{Error, Result};

/// `k`-th moment of the semicircle law on `[-2, 2]`: `Cat_{k/2}` for even `k`, else 0.
pub fn semicircle_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let m = u64::from(k / 2);
    // Cat_m = binom(2m, m)/(m+1), accumulated exactly while it fits.
    let mut c: u128 = 1;
    for i in 0..m {
        c = c * 2 * (2 * u128::from(i) + 1) / (u128::from(i) + 2);
    }
    c as f64
}

/// Diagonal of `N` reals in `[-2, 2]` whose first `q` normalized power traces
/// match the semicircle moments up to `2^k (2q+4)/N`.
///
/// Atoms sit at `2 cos(2 pi l / L)` with `L = 2q + 5` and weights
/// `(4 - x^2)/(2L)`; this quadrature is exact for every power below `L - 2`.
/// Weights are rounded to multiples of `1/N` by largest remainders.
pub fn semicircle_diagonal(n: usize, q: usize) -> Result<DiagonalSpectrum> {
    if q < 1 || n <= 2 * (q + 2) {
        return Err(Error::InvalidConfig(format!(
            "semicircle diagonal needs q >= 1 and N > 2(q+2); got N={n}, q={q}"
        )));
    }
    let l = 2 * q + 5;
    // x_l = x_{L-l}, so only l = 0..=(L-1)/2 are distinct; l = 0 has weight 0.
    let half = (l - 1) / 2;
    let lf = l as f64;
    let (xs, ws): (Vec<f64>, Vec<f64>) = (0..=half)
        .map(|i| {
            let x = 2.0 * (std::f64::consts::TAU * i as f64 / lf).cos();
            let w = (4.0 - x * x) / (2.0 * lf);
            (x, if i == 0 { w } else { 2.0 * w })
        })
        .unzip();
    let counts = largest_remainder(&ws, n);
    let mut values = Vec::with_capacity(n);
    for (&x, &c) in xs.iter().zip(&counts) {
        values.extend(std::iter::repeat_n(x.clamp(-2.0, 2.0), c));
    }
    values.sort_by(f64::total_cmp);
    Ok(DiagonalSpectrum::real(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_values() {
        let want = [1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0, 0.0, 42.0];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(semicircle_moment(k as u32), *w);
        }
        assert_eq!(semicircle_moment(40), 6_564_120_420.0);
    }

    #[test]
    fn small_case_bound_and_purity() {
        let d = semicircle_diagonal(1024, 4).unwrap();
        assert_eq!(d.dim(), 1024);
        assert!(d.values.iter().all(|v| v.abs() <= 2.0));
        let b2 = d.normalized_power_trace(2).re;
        assert!((b2 - 1.0).abs() <= 4.0 * 12.0 / 1024.0);
        assert!(d.normalized_power_trace(1).re.abs() <= 2.0 * 12.0 / 1024.0);
        assert_eq!(d, semicircle_diagonal(1024, 4).unwrap());
        assert!(semicircle_diagonal(12, 4).is_err());
    }
}
