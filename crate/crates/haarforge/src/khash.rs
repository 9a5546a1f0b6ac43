//! k-wise independent hashing by polynomial evaluation over `GF(2^w)`.
//!
//! A member is `h(x) = a_0 + a_1 x + ... + a_{k-1} x^{k-1}` with uniform
//! coefficients; for distinct inputs the outputs are jointly uniform because
//! the Vandermonde map from coefficients to values is a bijection.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Middle exponents of the lowest-weight irreducible `x^w + ... + 1`, `w = 1..=64`.
/// `w = 1` is `x + 1`.
const MODULI: [&[u32]; 64] = [
    &[],
    &[1],
    &[1],
    &[1],
    &[2],
    &[1],
    &[1],
    &[4, 3, 1],
    &[1],
    &[3],
    &[2],
    &[3],
    &[4, 3, 1],
    &[5],
    &[1],
    &[5, 3, 1],
    &[3],
    &[3],
    &[5, 2, 1],
    &[3],
    &[2],
    &[1],
    &[5],
    &[4, 3, 1],
    &[3],
    &[4, 3, 1],
    &[5, 2, 1],
    &[1],
    &[2],
    &[1],
    &[3],
    &[7, 3, 2],
    &[10],
    &[7],
    &[2],
    &[9],
    &[6, 4, 1],
    &[6, 5, 1],
    &[4],
    &[5, 4, 3],
    &[3],
    &[7],
    &[6, 4, 3],
    &[5],
    &[4, 3, 1],
    &[1],
    &[5],
    &[5, 3, 2],
    &[9],
    &[4, 3, 2],
    &[6, 3, 1],
    &[3],
    &[6, 2, 1],
    &[9],
    &[7],
    &[7, 4, 2],
    &[4],
    &[19],
    &[7, 4, 2],
    &[1],
    &[5, 2, 1],
    &[29],
    &[1],
    &[4, 3, 1],
];

/// Binary field `GF(2^w)` with a fixed modulus from the table above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryField {
    width: u32,
    /// Modulus without its leading `x^w` term.
    low: u64,
}

impl BinaryField {
    pub fn new(width: u32) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::InvalidArgument(format!(
                "field width must be in 1..=64, got {width}"
            )));
        }
        let low = MODULI[width as usize - 1]
            .iter()
            .fold(1u64, |acc, &e| acc | (1u64 << e));
        Ok(Self { width, low })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Full modulus as a bit mask (`x^w` included) for widths below 64.
    pub fn modulus(&self) -> u128 {
        (1u128 << self.width) | u128::from(self.low)
    }

    pub fn order(&self) -> u128 {
        1u128 << self.width
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let w = self.width;
        let mut prod = clmul(a, b);
        for bit in (w..2 * w - 1).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= (1u128 << bit) | (u128::from(self.low) << (bit - w));
            }
        }
        prod as u64 & self.mask()
    }

    pub fn pow(&self, mut a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

/// Carry-less product of two 64-bit polynomials.
fn clmul(a: u64, b: u64) -> u128 {
    let mut out = 0u128;
    let a = u128::from(a);
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    out
}

/// Random bits drawn from an RNG, with an exact count of bits handed out.
pub struct BitSource<'a, R: RngCore> {
    rng: &'a mut R,
    buffer: u64,
    available: u32,
    consumed: u64,
}

impl<'a, R: RngCore> BitSource<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self {
            rng,
            buffer: 0,
            available: 0,
            consumed: 0,
        }
    }

    /// `bits <= 64` fresh bits in the low end of the result.
    pub fn take(&mut self, bits: u32) -> u64 {
        assert!(bits <= 64);
        let mut out = 0u64;
        let mut filled = 0;
        while filled < bits {
            if self.available == 0 {
                self.buffer = self.rng.next_u64();
                self.available = 64;
            }
            let n = (bits - filled).min(self.available);
            let chunk = if n == 64 {
                self.buffer
            } else {
                self.buffer & ((1u64 << n) - 1)
            };
            out |= chunk << filled;
            self.buffer = if n == 64 { 0 } else { self.buffer >> n };
            self.available -= n;
            filled += n;
        }
        self.consumed += u64::from(bits);
        out
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// One member of the degree-`(k-1)` polynomial family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashFamilyMember {
    pub k: usize,
    pub w_in: u32,
    pub w_out: u32,
    /// `a_0 .. a_{k-1}` as elements of `GF(2^max(w_in, w_out))`.
    pub coeffs: Vec<u64>,
}

impl HashFamilyMember {
    pub fn new(w_in: u32, w_out: u32, coeffs: Vec<u64>) -> Result<Self> {
        let field = BinaryField::new(w_in.max(w_out))?;
        if w_in == 0 || w_out == 0 || coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "widths and k must be positive".into(),
            ));
        }
        if coeffs.iter().any(|&c| c & !field.mask() != 0) {
            return Err(Error::InvalidArgument(
                "coefficient outside the field".into(),
            ));
        }
        Ok(Self {
            k: coeffs.len(),
            w_in,
            w_out,
            coeffs,
        })
    }

    pub fn field(&self) -> BinaryField {
        BinaryField::new(self.w_in.max(self.w_out)).expect("validated at construction")
    }

    /// Random bits needed to draw a member: `k * max(w_in, w_out)`.
    pub fn bit_cost(k: usize, w_in: u32, w_out: u32) -> u64 {
        k as u64 * u64::from(w_in.max(w_out))
    }
}

/// Uniform member drawn from an explicit bit source.
pub fn sample_hash_from_bits<R: RngCore>(
    k: usize,
    w_in: u32,
    w_out: u32,
    bits: &mut BitSource<'_, R>,
) -> Result<HashFamilyMember> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "independence order k must be >= 1".into(),
        ));
    }
    if w_in == 0 || w_out == 0 || w_in.max(w_out) > 64 {
        return Err(Error::InvalidArgument(format!(
            "widths must be in 1..=64, got ({w_in}, {w_out})"
        )));
    }
    let w = w_in.max(w_out);
    let coeffs = (0..k).map(|_| bits.take(w)).collect();
    HashFamilyMember::new(w_in, w_out, coeffs)
}

/// Uniform member; consumes exactly `k * max(w_in, w_out)` bits of `rng`'s output.
pub fn sample_hash<R: RngCore>(
    k: usize,
    w_in: u32,
    w_out: u32,
    rng: &mut R,
) -> Result<HashFamilyMember> {
    sample_hash_from_bits(k, w_in, w_out, &mut BitSource::new(rng))
}

/// `h(x)` by Horner's rule, truncated to the low `w_out` bits.
pub fn hash_eval(h: &HashFamilyMember, x: u64) -> Result<u64> {
    if h.w_in < 64 && x >> h.w_in != 0 {
        return Err(Error::InvalidArgument(format!(
            "input {x} does not fit in {} bits",
            h.w_in
        )));
    }
    let f = h.field();
    let acc = h
        .coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &a| f.add(f.mul(acc, x), a));
    Ok(if h.w_out == 64 {
        acc
    } else {
        acc & ((1u64 << h.w_out) - 1)
    })
}

/// Seed material for the `j`-th correlated circuit: `h(j)`.
pub fn hashed_seed_stream(h: &HashFamilyMember, j: u64) -> Result<u64> {
    hash_eval(h, j)
}
