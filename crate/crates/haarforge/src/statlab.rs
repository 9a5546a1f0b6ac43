//! Monte-Carlo measurement layer.
//!
//! Samples are generated in parallel by index and reduced serially in index
//! order, so every statistic is independent of the worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::UnitarySampler;
use crate::matrixcore::trace_of_product;
use crate::{Error, Result};

/// Evaluate `f(0..n)` on the current rayon pool; results come back in index order.
pub fn par_map_indexed<T: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Streaming mean and variance (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the mean.
    pub m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn from_values(xs: &[f64]) -> Self {
        let mut s = Self::default();
        xs.iter().for_each(|&x| s.push(x));
        s
    }

    /// Combine two disjoint batches.
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let (a, b) = (self.count as f64, other.count as f64);
        Self {
            count: n,
            mean: self.mean + d * b / n as f64,
            m2: self.m2 + other.m2 + d * d * a * b / n as f64,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Independent [`RunningStats`] for real and imaginary parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexStats {
    pub re: RunningStats,
    pub im: RunningStats,
}

impl ComplexStats {
    pub fn push(&mut self, z: Complex64) {
        self.re.push(z.re);
        self.im.push(z.im);
    }

    pub fn from_values(zs: &[Complex64]) -> Self {
        let mut s = Self::default();
        zs.iter().for_each(|&z| s.push(z));
        s
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            re: self.re.merge(&other.re),
            im: self.im.merge(&other.im),
        }
    }

    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.re.mean, self.im.mean)
    }

    /// `sqrt(Var re + Var im) / sqrt(n)`: standard error of the complex mean.
    pub fn stderr(&self) -> f64 {
        (self.re.stderr().powi(2) + self.im.stderr().powi(2)).sqrt()
    }

    pub fn count(&self) -> u64 {
        self.re.count
    }
}

/// One row of a moment table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub p: usize,
    pub mean_re: f64,
    pub mean_im: f64,
    pub stderr: f64,
    pub samples: u64,
    /// Haar root-mean-square of `btr U^p`, i.e. `sqrt(min(p, N))/N`.
    pub reference: f64,
}

impl MomentRow {
    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.mean_re, self.mean_im)
    }
}

/// Estimated `E btr W^p` for `p = 1..=p_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub ensemble: String,
    pub dim: usize,
    pub rows: Vec<MomentRow>,
}

/// `E |tr U^j|^2 = min(j, N)` for Haar `U`.
pub fn haar_moment_reference(j: usize, n: usize) -> f64 {
    j.min(n) as f64
}

/// `E |tr W^j|^2` estimate next to the Haar value `min(j, N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentRow {
    pub j: usize,
    pub mean: f64,
    pub stderr: f64,
    pub reference: f64,
}

/// Monte-Carlo estimate of `E btr W^p` over draws `0..samples` of `sampler`.
pub fn mc_trace_moments(
    sampler: &dyn UnitarySampler,
    p_max: usize,
    samples: usize,
) -> Result<MomentReport> {
    mc_moment_tables(sampler, p_max, samples).map(|t| t.0)
}

/// [`mc_trace_moments`] together with `E |tr W^j|^2` from the same draws.
pub fn mc_moment_tables(
    sampler: &dyn UnitarySampler,
    p_max: usize,
    samples: usize,
) -> Result<(MomentReport, Vec<SecondMomentRow>)> {
    if samples < 2 || p_max == 0 {
        return Err(Error::InvalidArgument(
            "need samples >= 2 and p_max >= 1".into(),
        ));
    }
    let values = par_map_indexed(samples, |i| sampler.moments(i as u64, p_max))?;
    let n = sampler.dim();
    let nf = n as f64;
    let mut first = vec![ComplexStats::default(); p_max];
    let mut second = vec![RunningStats::default(); p_max];
    for m in &values {
        for (p, z) in m.entries().iter().enumerate() {
            first[p].push(*z);
            second[p].push(z.norm_sqr() * nf * nf);
        }
    }
    let rows = first
        .iter()
        .enumerate()
        .map(|(i, s)| MomentRow {
            p: i + 1,
            mean_re: s.re.mean,
            mean_im: s.im.mean,
            stderr: s.stderr(),
            samples: s.count(),
            reference: haar_moment_reference(i + 1, n).sqrt() / nf,
        })
        .collect();
    let second = second
        .iter()
        .enumerate()
        .map(|(i, s)| SecondMomentRow {
            j: i + 1,
            mean: s.mean,
            stderr: s.stderr(),
            reference: haar_moment_reference(i + 1, n),
        })
        .collect();
    Ok((
        MomentReport {
            ensemble: sampler.label(),
            dim: n,
            rows,
        },
        second,
    ))
}

/// `sum_p |mean_p|` with error `sqrt(sum_p stderr_p^2)`.
pub fn moment_l1(report: &MomentReport) -> (f64, f64) {
    let value = report.rows.iter().map(|r| r.mean().norm()).sum();
    let err = report
        .rows
        .iter()
        .map(|r| r.stderr * r.stderr)
        .sum::<f64>()
        .sqrt();
    (value, err)
}

/// `2 (T+1)^{3/2} / (3N)`, the Haar expectation bound on the moment l1 norm.
pub fn haar_l1_bound(t: usize, n: usize) -> f64 {
    2.0 * ((t + 1) as f64).powf(1.5) / (3.0 * n as f64)
}

/// Frame-potential estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePotential {
    pub t: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub pairs: u64,
}

/// `E |tr(W^dagger W')|^{2T}` over independent pairs (draws `2i`, `2i+1`) for each `T` in `orders`.
pub fn frame_potentials(
    sampler: &dyn UnitarySampler,
    orders: &[usize],
    pairs: usize,
) -> Result<Vec<FramePotential>> {
    if pairs < 2 {
        return Err(Error::InvalidArgument("need at least two pairs".into()));
    }
    let n = sampler.dim();
    if let Some(&t) = orders.iter().find(|&&t| t == 0 || t > n) {
        return Err(Error::InvalidArgument(format!(
            "frame potential order {t} must be in 1..=N"
        )));
    }
    let overlaps = par_map_indexed(pairs, |i| {
        let w = sampler.sample(2 * i as u64)?;
        let v = sampler.sample(2 * i as u64 + 1)?;
        // tr(W^dagger V) = sum_ij conj(W_ij) V_ij
        let adj = w.as_mat().adjoint().to_owned();
        Ok(trace_of_product(&adj, v.as_mat()).norm_sqr())
    })?;
    Ok(orders
        .iter()
        .map(|&t| {
            let s = RunningStats::from_values(
                &overlaps
                    .iter()
                    .map(|x| x.powi(t as i32))
                    .collect::<Vec<_>>(),
            );
            FramePotential {
                t,
                estimate: s.mean,
                stderr: s.stderr(),
                pairs: s.count,
            }
        })
        .collect())
}

/// Single-order convenience wrapper around [`frame_potentials`].
pub fn frame_potential(sampler: &dyn UnitarySampler, t: usize, pairs: usize) -> Result<(f64, f64)> {
    let f = frame_potentials(sampler, &[t], pairs)?;
    Ok((f[0].estimate, f[0].stderr))
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Normal quantile used for tail intervals (about 99.7% two-sided).
pub const WILSON_Z: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub t: f64,
    pub empirical: f64,
    pub lower: f64,
    pub upper: f64,
    pub bound: f64,
    /// The Wilson lower limit exceeds the theoretical bound.
    pub flagged: bool,
}

/// Empirical `P(|X - mean| >= t)` on `t_grid` against `bound(t)`, with Wilson intervals.
pub fn concentration_tail(
    sampler: impl Fn(usize) -> Result<Complex64> + Sync + Send,
    bound: impl Fn(f64) -> f64,
    t_grid: &[f64],
    samples: usize,
) -> Result<Vec<TailRow>> {
    if t_grid.is_empty()
        || t_grid.iter().any(|&t| !(t > 0.0))
        || t_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidArgument(
            "t grid must be positive and strictly ascending".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let values = par_map_indexed(samples, sampler)?;
    let mean = ComplexStats::from_values(&values).mean();
    let dev: Vec<f64> = values.iter().map(|z| (z - mean).norm()).collect();
    Ok(tail_table(&dev, &bound, t_grid))
}

fn tail_table(dev: &[f64], bound: &impl Fn(f64) -> f64, t_grid: &[f64]) -> Vec<TailRow> {
    let n = dev.len() as u64;
    t_grid
        .iter()
        .map(|&t| {
            // Deviations within rounding of zero never count as exceedances.
            let hits = dev.iter().filter(|&&d| d >= t && d > 1e-12).count() as u64;
            let (lower, upper) = wilson_interval(hits, n, WILSON_Z);
            let b = bound(t);
            TailRow {
                t,
                empirical: hits as f64 / n as f64,
                lower,
                upper,
                bound: b,
                flagged: lower > b,
            }
        })
        .collect()
}

/// Semicircle CDF `1/2 + x sqrt(4 - x^2)/(4 pi) + arcsin(x/2)/pi` on `[-2, 2]`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    0.5 + x * (4.0 - x * x).sqrt() / (4.0 * std::f64::consts::PI)
        + (x / 2.0).asin() / std::f64::consts::PI
}

/// Sup-norm distance between the empirical CDF of `eigs` and the semicircle CDF.
pub fn ecdf_semicircle_distance(eigs: &[f64]) -> f64 {
    let mut xs = eigs.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = semicircle_cdf(x);
            // Just below x the ECDF is (first index of x)/n, at x it is (last index + 1)/n.
            let below = xs.partition_point(|&y| y < x) as f64 / n;
            let at = (xs.partition_point(|&y| y <= x)).max(i + 1) as f64 / n;
            (f - below).abs().max((f - at).abs())
        })
        .fold(0.0, f64::max)
}
