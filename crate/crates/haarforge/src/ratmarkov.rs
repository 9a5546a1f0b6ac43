//! Bessel `J1`, theta calibration, and the rational Markov-inequality toolkit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{tol, Error, Result};

// ---------------------------------------------------------------------------
// Bessel J1

/// Below this argument the power series is used.
const SERIES_MAX: f64 = 8.0;
/// From this argument on the Hankel expansion is accurate to machine precision.
const HANKEL_MIN: f64 = 25.0;

/// `J1(x)` to about `1e-12` absolute accuracy. Odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < SERIES_MAX {
        j1_series(x)
    } else if x < HANKEL_MIN {
        j1_quadrature(x)
    } else {
        j1_hankel(x).0
    }
}

fn j1_series(x: f64) -> f64 {
    // sum_m (-1)^m (x/2)^{2m+1} / (m! (m+1)!)
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    for m in 1..200 {
        let mf = m as f64;
        term *= -h2 / (mf * (mf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Trapezoid rule for `(1/2pi) int_0^{2pi} cos(t - x sin t) dt`; the
/// integrand is periodic and entire, so the error decays like `J_M(x)`.
fn j1_quadrature(x: f64) -> f64 {
    let m = (x.ceil() as usize) + 64;
    let h = std::f64::consts::TAU / m as f64;
    (0..m)
        .map(|j| {
            let t = j as f64 * h;
            (t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// Hankel expansion `sqrt(2/(pi x)) (P cos chi - Q sin chi)`, `chi = x - 3pi/4`,
/// truncated at the smallest term. Returns the value and the magnitude of the
/// first omitted term, which bounds the remainder.
fn j1_hankel(x: f64) -> (f64, f64) {
    let mu = 4.0;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a: f64 = 1.0; // a_k(1) / x^k
    let mut prev = f64::INFINITY;
    let mut omitted = 0.0;
    for k in 0..200 {
        if a.abs() > prev || a.abs() < 1e-17 {
            omitted = a.abs();
            break;
        }
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        prev = a.abs();
        let odd = (2 * k + 1) as f64;
        a *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    let chi = x - 0.75 * std::f64::consts::PI;
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    (amp * (p * chi.cos() - q * chi.sin()), amp * omitted)
}

/// Remainder bound of the Hankel expansion at `x`: the first omitted term.
pub fn hankel_remainder_bound(x: f64) -> f64 {
    j1_hankel(x).1
}

/// Envelope `sqrt(22753 / (8192 pi x))` dominating `|J1(x)|` for `x > 0`.
pub fn j1_envelope(x: f64) -> f64 {
    (22753.0 / (8192.0 * std::f64::consts::PI * x)).sqrt()
}

/// `theta_k = j_{1,k} / 2`, where `j_{1,k}` is the `k`-th positive zero of `J1`,
/// so that `J1(2 theta_k) = 0`.
pub fn calibrate_theta(k: usize) -> Result<f64> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidConfig(format!(
            "theta index must be in 1..=20, got {k}"
        )));
    }
    // McMahon's estimate, then bisection on a bracket around it.
    let beta = (k as f64 + 0.25) * std::f64::consts::PI;
    let guess = beta - 3.0 / (8.0 * beta);
    let (mut lo, mut hi) = (guess - 0.2, guess + 0.2);
    let (mut flo, fhi) = (bessel_j1(lo), bessel_j1(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::numerical(
            k,
            "no sign change around the Bessel zero estimate",
        ));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j1(mid);
        if fm == 0.0 {
            return Ok(mid / 2.0);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.25 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Rational Markov toolkit

/// Poles `a_k` of `t_{2n}(x) = prod (1 + a_k x)`: real or in conjugate pairs, `|a_k| < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleSet {
    poles: Vec<Complex64>,
}

impl PoleSet {
    pub fn new(poles: Vec<Complex64>) -> Result<Self> {
        if !poles.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "pole list must have even length, got {}",
                poles.len()
            )));
        }
        if let Some(a) = poles.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidArgument(format!("pole {a} has modulus >= 1")));
        }
        // Multiset conjugate closure: match each non-real pole with an unused conjugate.
        let mut used = vec![false; poles.len()];
        for i in 0..poles.len() {
            if used[i] || poles[i].im == 0.0 {
                continue;
            }
            used[i] = true;
            let partner = (0..poles.len())
                .find(|&j| !used[j] && (poles[j] - poles[i].conj()).norm() <= 1e-15);
            match partner {
                Some(j) => used[j] = true,
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "pole {} lacks its conjugate",
                        poles[i]
                    )))
                }
            }
        }
        Ok(Self { poles })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            poles: vec![Complex64::new(0.0, 0.0); 2 * n],
        }
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// Half the number of poles.
    pub fn n(&self) -> usize {
        self.poles.len() / 2
    }

    fn check_pole_distance(&self, x: f64) -> Result<()> {
        for a in &self.poles {
            if (Complex64::new(1.0, 0.0) + a * x).norm() < tol::POLE {
                return Err(Error::InvalidArgument(format!(
                    "x = {x} is within {} of the pole of {a}",
                    tol::POLE
                )));
            }
        }
        Ok(())
    }
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > tol::REAL_PART * z.re.abs().max(1.0) {
        return Err(Error::numerical(
            0,
            format!("{what} has imaginary residue {:.3e}", z.im),
        ));
    }
    Ok(z.re)
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("x = {x} outside [-1, 1]")));
    }
    Ok(())
}

/// `lambda_n(x) = (1/2) sum_k sqrt(1 - a_k^2) / (1 + a_k x)`.
pub fn lambda_n(poles: &PoleSet, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    poles.check_pole_distance(x)?;
    let one = Complex64::new(1.0, 0.0);
    let s: Complex64 = poles
        .poles
        .iter()
        .map(|a| (one - a * a).sqrt() / (one + a * x))
        .sum();
    real_part(s * 0.5, "lambda_n")
}

fn half_phase(poles: &PoleSet, x: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    poles
        .poles
        .iter()
        .map(|a| ((a + x) / (one + a * x)).acos())
        .sum::<Complex64>()
        * 0.5
}

/// `m_n(x) = cos((1/2) sum_k arccos((x + a_k)/(1 + a_k x)))`.
pub fn cosine_fraction(poles: &PoleSet, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    poles.check_pole_distance(x)?;
    real_part(half_phase(poles, x).cos(), "cosine fraction")
}

/// `m_n'(x) = sin(phi/2) lambda_n(x) / sqrt(1 - x^2)` on the open interval.
pub fn cosine_fraction_derivative(poles: &PoleSet, x: f64) -> Result<f64> {
    if !(-1.0 < x && x < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "derivative needs x in (-1, 1), got {x}"
        )));
    }
    poles.check_pole_distance(x)?;
    let s = real_part(half_phase(poles, x).sin(), "cosine fraction phase")?;
    Ok(s * lambda_n(poles, x)? / (1.0 - x * x).sqrt())
}

/// Zeros of `m_n` in `(-1, 1)`, located by sign changes on a uniform grid of
/// `grid` cells and refined by bisection.
pub fn cosine_fraction_zeros(poles: &PoleSet, grid: usize) -> Result<Vec<f64>> {
    let xs: Vec<f64> = (0..=grid)
        .map(|i| -1.0 + 2.0 * i as f64 / grid as f64)
        .collect();
    let vals = xs
        .iter()
        .map(|&x| cosine_fraction(poles, x))
        .collect::<Result<Vec<_>>>()?;
    let mut zeros = Vec::new();
    for i in 0..grid {
        if vals[i] == 0.0 && i > 0 {
            zeros.push(xs[i]);
        } else if vals[i] * vals[i + 1] < 0.0 {
            let (mut lo, mut hi, mut flo) = (xs[i], xs[i + 1], vals[i]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = cosine_fraction(poles, mid)?;
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    Ok(zeros)
}

/// Sharp derivative bound for a rational function bounded by 1 on `[-1, 1]`:
/// `lambda_n(x)/sqrt(1-x^2)` between the outermost zeros of `m_n`, `|m_n'(x)|` outside.
pub fn markov_derivative_bound(poles: &PoleSet, zeros: &[f64], x: f64) -> Result<f64> {
    let (first, last) = match (zeros.first(), zeros.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            return Err(Error::InvalidArgument(
                "need at least one zero of m_n".into(),
            ))
        }
    };
    if (first..=last).contains(&x) {
        Ok(lambda_n(poles, x)? / (1.0 - x * x).sqrt())
    } else {
        Ok(cosine_fraction_derivative(poles, x)?.abs())
    }
}

/// Inflation `1 + cI/(2 - cI)` when the function is only bounded on a grid of
/// spacing `I` and `c` dominates the sharp bound at `x`; `None` outside the
/// admissible set `1 - cI/2 > 0`.
pub fn discrete_markov_factor(c: f64, spacing: f64) -> Option<f64> {
    let ci = c * spacing;
    (1.0 - ci / 2.0 > 0.0).then(|| 1.0 + ci / (2.0 - ci))
}

/// The pole set used for the trace-moment interpolation argument:
/// `+-sqrt(k/p')` and `+-i sqrt(k/p')` for `k = 1..p-1`, each `2p` times, plus
/// `8p` zeros, with `p' = 48 p^{7/2}`; `8p^2` poles in total.
pub fn paper_pole_set(p: usize) -> Result<PoleSet> {
    if p < 1 {
        return Err(Error::InvalidArgument("p must be >= 1".into()));
    }
    let pp = 48.0 * (p as f64).powf(3.5);
    let mut poles = Vec::with_capacity(8 * p * p);
    for k in 1..p {
        let r = (k as f64 / pp).sqrt();
        for _ in 0..2 * p {
            poles.push(Complex64::new(r, 0.0));
            poles.push(Complex64::new(-r, 0.0));
            poles.push(Complex64::new(0.0, r));
            poles.push(Complex64::new(0.0, -r));
        }
    }
    poles.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), 8 * p));
    PoleSet::new(poles)
}

/// `4p + 4p sqrt(2) (p - 1)`, the bound on `lambda_n` for [`paper_pole_set`].
pub fn paper_lambda_bound(p: usize) -> f64 {
    let pf = p as f64;
    4.0 * pf + 4.0 * pf * std::f64::consts::SQRT_2 * (pf - 1.0)
}

/// Chebyshev `T_n(x)` by the three-term recurrence.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}
