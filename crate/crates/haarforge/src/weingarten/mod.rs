//! Exact symmetric-group characters, Schur evaluations and Weingarten values.
//!
//! Everything here is exact: integers for characters and arbitrary-precision
//! rationals for Weingarten values. Floats appear only when a caller asks for
//! a numerical value.

mod conjugation;
pub mod perm;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use conjugation::{
    conjugation_coefficients, haar_conjugation_moment_exact, haar_conjugation_moment_mc,
    ConjugationTable,
};

/// Largest `q` for [`partitions`].
pub const MAX_PARTITION_WEIGHT: usize = 12;
/// Largest `q` for exact Weingarten values.
pub const MAX_WEINGARTEN_ORDER: usize = 8;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

/// A partition read as the cycle lengths of a permutation.
pub type CycleType = Partition;

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Self(parts))
    }

    pub(crate) fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    /// `1^q`.
    pub fn identity(q: usize) -> Self {
        Self(vec![1; q])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts (cycles).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `z_mu = prod_i i^{m_i} m_i!`, the centralizer order.
    pub fn centralizer_order(&self) -> u128 {
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .iter()
            .map(|(&i, &m)| (i as u128).pow(m) * factorial(m as usize))
            .product()
    }

    /// Size of the conjugacy class `q! / z_mu`.
    pub fn class_size(&self) -> u128 {
        factorial(self.weight()) / self.centralizer_order()
    }

    /// Hook lengths in row-major order.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight());
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                out.push(row - j + conj.0[j] - i - 1);
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..cols)
                .map(|j| self.0.iter().filter(|&&r| r > j).count())
                .collect(),
        )
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All partitions of `q` in reverse-lexicographic order, `(q)` first and `1^q` last.
pub fn partitions(q: usize) -> Result<Vec<Partition>> {
    if !(1..=MAX_PARTITION_WEIGHT).contains(&q) {
        return Err(Error::Unsupported(format!(
            "partitions need 1 <= q <= {MAX_PARTITION_WEIGHT}, got {q}"
        )));
    }
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, q, &mut Vec::new(), &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Characters

/// Murnaghan-Nakayama on beta-sets: removing a border strip of length `r`
/// moves one bead from position `b` to a free position `b - r`, with sign
/// `(-1)^(beads strictly between)`.
fn mn_character(
    beta: &mut Vec<usize>,
    mu: &[usize],
    memo: &mut HashMap<(Vec<usize>, usize), i64>,
) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (beta.clone(), mu.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0i64;
    for idx in 0..beta.len() {
        let b = beta[idx];
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        beta[idx] = target;
        let v = mn_character(beta, rest, memo);
        beta[idx] = b;
        total += if between % 2 == 0 { v } else { -v };
    }
    memo.insert(key, total);
    total
}

/// `chi^lambda(mu)` by recursive border-strip removal.
pub fn character(lambda: &Partition, mu: &CycleType) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return Err(Error::InvalidArgument(format!(
            "weights differ: |lambda| = {}, |mu| = {}",
            lambda.weight(),
            mu.weight()
        )));
    }
    let l = lambda.len();
    let mut beta: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i)
        .collect();
    // The memo is keyed by the remaining cycle count, valid for one fixed mu.
    Ok(mn_character(&mut beta, mu.parts(), &mut HashMap::new()))
}

/// Character table of `S(q)`: rows and columns in [`partitions`] order.
#[derive(Debug)]
pub struct CharacterTable {
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|x| x == p)
    }
}

/// Cached character table.
pub fn character_table(q: usize) -> Result<Arc<CharacterTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(&q) {
        return Ok(t.clone());
    }
    let parts = partitions(q)?;
    let values = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|m| character(l, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Arc::new(CharacterTable {
        partitions: parts,
        values,
    });
    cache
        .lock()
        .expect("cache poisoned")
        .insert(q, table.clone());
    Ok(table)
}

/// `q! / prod hooks`, the dimension of the irreducible representation.
pub fn hook_length_dimension(lambda: &Partition) -> u128 {
    factorial(lambda.weight()) / lambda.hooks().iter().map(|&h| h as u128).product::<u128>()
}

// ---------------------------------------------------------------------------
// Schur polynomials at 1^N

fn check_schur(lambda: &Partition, n: u64) -> Result<()> {
    if (n as usize) < lambda.len() {
        return Err(Error::InvalidArgument(format!(
            "N = {n} is below the number of parts {}",
            lambda.len()
        )));
    }
    Ok(())
}

/// `s_lambda(1^N) = prod_cells (N + content) / hook`.
pub fn schur_at_ones(lambda: &Partition, n: u64) -> Result<BigRational> {
    check_schur(lambda, n)?;
    let hooks = lambda.hooks();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut h = hooks.iter();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            num *= BigInt::from(n as i64 + j as i64 - i as i64);
            den *= BigInt::from(*h.next().expect("one hook per cell") as i64);
        }
    }
    Ok(BigRational::new(num, den))
}

/// `prod_{i<j<=N} (lambda_i - lambda_j + j - i)/(j - i)`; quadratic in `N`, kept as a cross-check.
pub fn schur_at_ones_pairwise(lambda: &Partition, n: u64) -> Result<BigRational> {
    check_schur(lambda, n)?;
    let n = n as usize;
    let lam = |i: usize| lambda.parts().get(i).copied().unwrap_or(0) as i64;
    let mut acc = BigRational::one();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (j - i) as i64;
            acc *= BigRational::new(BigInt::from(lam(i) - lam(j) + d), BigInt::from(d));
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Weingarten values

/// Exact `Wg(pi, N)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeingartenValue {
    pub value: BigRational,
    pub n: u64,
}

impl WeingartenValue {
    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

impl fmt::Display for WeingartenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

/// Accurate conversion for rationals whose parts overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(a), Some(b)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if a.is_finite() && b.is_finite() && b != 0.0 {
            return a / b;
        }
    }
    // Scale to keep 64 significant bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 64;
    let scaled = if shift >= 0 {
        r.numer() / (r.denom() << shift as usize)
    } else {
        (r.numer() << (-shift) as usize) / r.denom()
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// `Wg(pi, N) = (1/q!^2) sum_lambda chi^lambda(1)^2 chi^lambda(pi) / s_lambda(1^N)`.
/// Memoized by `(cycle type, N)`.
pub fn weingarten(pi: &CycleType, n: u64) -> Result<WeingartenValue> {
    let q = pi.weight();
    if q == 0 || q > MAX_WEINGARTEN_ORDER {
        return Err(Error::Unsupported(format!(
            "Weingarten values need 1 <= q <= {MAX_WEINGARTEN_ORDER}, got {q}"
        )));
    }
    if n < q as u64 {
        return Err(Error::Unsupported(format!(
            "N = {n} < q = {q}: too close to the poles of Wg"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<(Partition, u64), BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache poisoned").get(&(pi.clone(), n)) {
        return Ok(WeingartenValue {
            value: v.clone(),
            n,
        });
    }
    let table = character_table(q)?;
    let col = table.index_of(pi).expect("cycle type is a partition of q");
    let mut acc = BigRational::zero();
    for (row, lambda) in table.partitions.iter().enumerate() {
        let dim = table.values[row][table.partitions.len() - 1];
        let chi = table.values[row][col];
        if chi == 0 {
            continue;
        }
        let s = schur_at_ones(lambda, n)?;
        acc += BigRational::from_integer(BigInt::from(dim * dim * chi)) / s;
    }
    let qf = BigInt::from(factorial(q));
    let value = acc / BigRational::from_integer(&qf * &qf);
    cache
        .lock()
        .expect("cache poisoned")
        .insert((pi.clone(), n), value.clone());
    Ok(WeingartenValue { value, n })
}

fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Exact leading term `N^{-2q + #cycles} prod_i (-1)^{|C_i|-1} Cat_{|C_i|-1}`.
pub fn weingarten_leading_exact(pi: &CycleType, n: u64) -> BigRational {
    let q = pi.weight() as u32;
    let mut coeff = BigInt::one();
    for &c in pi.parts() {
        let cat = catalan(c - 1);
        coeff *= if (c - 1) % 2 == 0 { cat } else { -cat };
    }
    let exp = 2 * q as i64 - pi.len() as i64;
    BigRational::new(coeff, BigInt::from(n).pow(exp as u32))
}

/// Leading term as a float.
pub fn weingarten_leading(pi: &CycleType, n: u64) -> f64 {
    let q = pi.weight() as i32;
    let coeff = rational_to_f64(&weingarten_leading_exact(pi, 1));
    coeff * (n as f64).powi(-2 * q + pi.len() as i32)
}

/// `|Wg(pi, N) - leading| / N^{-2q + #cycles - 2}`: the relative size of the first correction.
pub fn subleading_ratio(pi: &CycleType, n: u64) -> Result<f64> {
    let exact = weingarten(pi, n)?.value;
    let diff = (exact - weingarten_leading_exact(pi, n)).abs();
    let q = pi.weight() as u32;
    let scale = BigRational::new(
        BigInt::one(),
        BigInt::from(n).pow(2 * q + 2 - pi.len() as u32),
    );
    Ok(rational_to_f64(&(diff / scale)))
}

/// Checks `[N^{#cycles(s t^-1)}] [Wg(s t^-1, N)] = I` exactly over `S(q)`.
pub fn gram_inversion_holds(q: usize, n: u64) -> Result<bool> {
    let perms = perm::all_perms(q);
    let table = character_table(q)?;
    // Integer numerators over a common denominator per cycle type.
    let wg: Vec<BigRational> = table
        .partitions
        .iter()
        .map(|p| weingarten(p, n).map(|w| w.value))
        .collect::<Result<_>>()?;
    let lcd = wg.iter().fold(BigInt::one(), |acc, w| {
        num_integer::Integer::lcm(&acc, w.denom())
    });
    let wg_num: Vec<BigInt> = wg.iter().map(|w| w.numer() * (&lcd / w.denom())).collect();
    let class_of: HashMap<Partition, usize> = table
        .partitions
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let inv: Vec<perm::Perm> = perms.iter().map(|p| perm::inverse(p)).collect();
    let npow: Vec<BigInt> = (0..=q).map(|c| BigInt::from(n).pow(c as u32)).collect();

    // Row s of G times column t of W, for all (s, t).
    let m = perms.len();
    let mut gram_class = vec![vec![0usize; m]; m];
    let mut gram_cycles = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in 0..m {
            let ab = perm::compose(&perms[a], &inv[b]);
            let ct = perm::cycle_type(&ab);
            gram_cycles[a][b] = ct.len();
            gram_class[a][b] = class_of[&ct];
        }
    }
    for s in 0..m {
        for t in 0..m {
            let mut acc = BigInt::zero();
            for r in 0..m {
                acc += &npow[gram_cycles[s][r]] * &wg_num[gram_class[r][t]];
            }
            let want = if s == t { lcd.clone() } else { BigInt::zero() };
            if acc != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn partition_counts_and_order() {
        assert_eq!(partitions(1).unwrap(), vec![p(&[1])]);
        assert_eq!(partitions(4).unwrap().len(), 5);
        assert_eq!(partitions(6).unwrap().len(), 11);
        assert_eq!(partitions(12).unwrap().len(), 77);
        assert_eq!(
            partitions(4).unwrap(),
            vec![
                p(&[4]),
                p(&[3, 1]),
                p(&[2, 2]),
                p(&[2, 1, 1]),
                p(&[1, 1, 1, 1])
            ]
        );
        assert!(partitions(13).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn small_characters() {
        for mu in partitions(5).unwrap() {
            assert_eq!(character(&p(&[5]), &mu).unwrap(), 1);
        }
        assert_eq!(character(&p(&[1, 1, 1]), &p(&[3])).unwrap(), 1);
        assert_eq!(character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), 0);
        assert!(character(&p(&[2, 1]), &p(&[2])).is_err());
    }

    #[test]
    fn schur_small_cases() {
        for n in [1u64, 3, 7, 100] {
            assert_eq!(schur_at_ones(&p(&[1]), n).unwrap(), r(n as i64, 1));
        }
        let n = 9i64;
        assert_eq!(schur_at_ones(&p(&[2]), 9).unwrap(), r(n * (n + 1), 2));
        assert_eq!(schur_at_ones(&p(&[1, 1]), 9).unwrap(), r(n * (n - 1), 2));
        assert!(schur_at_ones(&p(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn weingarten_q1_q2() {
        for n in [3u64, 5, 8, 16] {
            let ni = n as i64;
            assert_eq!(weingarten(&p(&[1]), n).unwrap().value, r(1, ni));
            assert_eq!(weingarten(&p(&[1, 1]), n).unwrap().value, r(1, ni * ni - 1));
            assert_eq!(
                weingarten(&p(&[2]), n).unwrap().value,
                r(-1, ni * (ni * ni - 1))
            );
        }
        let w = weingarten(&p(&[2]), 5).unwrap();
        assert_eq!(w.to_string(), "-1/120");
        assert!(matches!(
            weingarten(&p(&[1, 1, 1]), 2),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            weingarten(&Partition::identity(9), 20),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn leading_terms() {
        assert_eq!(weingarten_leading(&Partition::identity(3), 10), 1e-3);
        assert_eq!(weingarten_leading_exact(&p(&[2]), 7), r(-1, 343));
        assert_eq!(weingarten_leading_exact(&p(&[3]), 2), r(2, 32));
    }

    #[test]
    fn gram_inversion_small() {
        assert!(gram_inversion_holds(2, 2).unwrap());
        assert!(gram_inversion_holds(3, 8).unwrap());
    }

    #[test]
    fn rational_conversion_of_huge_values() {
        let big = BigRational::new(BigInt::from(3), BigInt::from(10).pow(400));
        let v = rational_to_f64(&(big * BigRational::from_integer(BigInt::from(10).pow(399))));
        assert!((v - 0.3).abs() < 1e-15);
    }
}
