//! Arithmetic in the prime field F_p and binomial coefficients modulo p.
//!
//! [`PrimeField`] is the computation context: it validates the modulus once
//! and caches factorial tables for the base-p digits used by Lucas' theorem.
//! Polynomial and operator code works with raw `u32` residues through the
//! context; [`FpScalar`] is the self-describing value type used at API
//! boundaries, carrying its modulus so that mixing fields is detected.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive). Products of two residues fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    fact: Arc<[u32]>,
    inv_fact: Arc<[u32]>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let p32 = p as u32;
        let mut fact = vec![1u32; p as usize];
        for i in 1..p as usize {
            fact[i] = ((fact[i - 1] as u64 * i as u64) % p) as u32;
        }
        let mut inv_fact = vec![1u32; p as usize];
        // Wilson: (p-1)! = -1, so its inverse is -1 as well.
        inv_fact[p as usize - 1] = p32 - 1;
        for i in (1..p as usize).rev() {
            inv_fact[i - 1] = ((inv_fact[i] as u64 * i as u64) % p) as u32;
        }
        Ok(PrimeField {
            p: p32,
            fact: fact.into(),
            inv_fact: inv_fact.into(),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_signed(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        // Extended Euclid on small integers.
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce_signed(t0))
    }

    pub fn element(&self, value: u64) -> FpScalar {
        FpScalar {
            value: self.reduce(value),
            modulus: self.p,
        }
    }

    /// `C(a, b)` for `a, b < p` from the factorial tables.
    #[inline]
    fn small_binom(&self, a: u32, b: u32) -> u32 {
        if b > a {
            return 0;
        }
        let (a, b) = (a as usize, b as usize);
        self.mul(self.fact[a], self.mul(self.inv_fact[b], self.inv_fact[a - b]))
    }

    /// `C(a, b) mod p` by Lucas' theorem: the product of digit binomials in base p.
    pub fn binom(&self, mut a: u64, mut b: u64) -> u32 {
        if b > a {
            return 0;
        }
        let p = self.p as u64;
        let mut acc = 1u32;
        while b > 0 {
            let (ad, bd) = ((a % p) as u32, (b % p) as u32);
            if bd > ad {
                return 0;
            }
            acc = self.mul(acc, self.small_binom(ad, bd));
            a /= p;
            b /= p;
        }
        acc % self.p
    }

    /// `Π_i C(a_i, b_i) mod p`; zero whenever `b ≰ a` componentwise.
    pub fn multi_binom(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = 1 % self.p;
        for (&ai, &bi) in a.iter().zip(b) {
            if bi > ai {
                return 0;
            }
            if bi == 0 || bi == ai {
                continue;
            }
            acc = self.mul(acc, self.binom(ai as u64, bi as u64));
            if acc == 0 {
                return 0;
            }
        }
        acc
    }

    /// `p^n` as a `u64`, or `None` on overflow.
    pub fn checked_power(&self, n: u32) -> Option<u64> {
        (self.p as u64).checked_pow(n)
    }
}

/// An element of F_p tagged with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: u32,
}

impl FpScalar {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FpScalar) -> Result<u64> {
        if self.modulus != other.modulus {
            return Err(Error::mismatch(format!(
                "F_{} vs F_{}",
                self.modulus, other.modulus
            )));
        }
        Ok(self.modulus as u64)
    }

    fn with(self, value: u64) -> FpScalar {
        FpScalar {
            value: (value % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }

    pub fn add(self, other: FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        Ok(self.with(self.value as u64 + other.value as u64))
    }

    pub fn sub(self, other: FpScalar) -> Result<FpScalar> {
        let p = self.check(other)?;
        Ok(self.with(self.value as u64 + p - other.value as u64))
    }

    pub fn mul(self, other: FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        Ok(self.with(self.value as u64 * other.value as u64))
    }

    pub fn neg(self) -> FpScalar {
        self.with(self.modulus as u64 - self.value as u64)
    }

    pub fn inv(self) -> Result<FpScalar> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.modulus));
        }
        // a^(p-2) by Fermat; the modulus is prime by construction.
        let mut acc = 1u64;
        let mut base = self.value as u64;
        let m = self.modulus as u64;
        let mut e = m - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Ok(self.with(acc))
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn binom_mod_p(field: &PrimeField, a: u64, b: u64) -> FpScalar {
    FpScalar {
        value: field.binom(a, b),
        modulus: field.p(),
    }
}

pub fn multiindex_binom(field: &PrimeField, a: &[u32], b: &[u32]) -> Result<FpScalar> {
    if a.len() != b.len() {
        return Err(Error::mismatch(format!(
            "multi-index dimensions {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(FpScalar {
        value: field.multi_binom(a, b),
        modulus: field.p(),
    })
}
