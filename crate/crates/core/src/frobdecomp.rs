//! Decomposition of a polynomial along p^n-th powers of the variables.
//!
//! Every `f` is uniquely `Σ_{0 ≤ α < p^n} g_α(x^{p^n}) · x^α`. Over F_p the
//! piece `g_α(x^{p^n})` is itself the p^n-th power of a "root" polynomial,
//! obtained by dividing exponents, so a [`PnDecomposition`] stores the roots
//! and both ideals `J_n(f)` (the pieces) and `I_n(f)` (the roots) derive from it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::{MultiIndex, Polynomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnDecomposition {
    ring: Ring,
    n: u32,
    q: u64,
    /// Sorted ascending by `α` under the ring's monomial order.
    parts: Vec<(MultiIndex, Polynomial)>,
}

impl PnDecomposition {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// `p^n`.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn parts(&self) -> &[(MultiIndex, Polynomial)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.parts.iter().map(|(a, _)| a)
    }

    pub fn root(&self, alpha: &[u32]) -> Option<&Polynomial> {
        self.parts
            .iter()
            .find(|(a, _)| a.as_slice() == alpha)
            .map(|(_, r)| r)
    }

    /// Builds a decomposition from explicit parts, validating the key range.
    pub fn from_parts(ring: &Ring, n: u32, parts: Vec<(MultiIndex, Polynomial)>) -> Result<Self> {
        let q = ring.prime_power(n)?;
        let mut map = BTreeMap::new();
        for (alpha, root) in parts {
            ring.check_compatible(root.ring())?;
            if alpha.len() != ring.nvars() || alpha.iter().any(|&a| a as u64 >= q) {
                return Err(Error::InvalidInput(format!(
                    "decomposition key {alpha} outside [0, {q})^{}",
                    ring.nvars()
                )));
            }
            if root.is_zero() {
                continue;
            }
            if map.insert(alpha.clone(), root.with_order(ring.order())).is_some() {
                return Err(Error::InvalidInput(format!("duplicate decomposition key {alpha}")));
            }
        }
        Ok(Self::sorted(ring, n, q, map))
    }

    fn sorted(ring: &Ring, n: u32, q: u64, map: BTreeMap<MultiIndex, Polynomial>) -> Self {
        let mut parts: Vec<_> = map.into_iter().collect();
        let order = ring.order();
        parts.sort_by(|a, b| order.cmp(&a.0, &b.0));
        PnDecomposition {
            ring: ring.clone(),
            n,
            q,
            parts,
        }
    }

    /// The piece `g_α(x^{p^n})` of every part, in key order.
    pub fn pieces(&self) -> Result<Vec<(MultiIndex, Polynomial)>> {
        self.parts
            .iter()
            .map(|(a, r)| Ok((a.clone(), r.frobenius(self.n)?)))
            .collect()
    }
}

/// Splits every exponent `γ = p^n·q + r` componentwise and files `c·x^q` under key `r`.
pub fn decompose(f: &Polynomial, n: u32) -> Result<PnDecomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("decomposition level must be at least 1".into()));
    }
    let ring = f.ring();
    let q = ring.prime_power(n)?;
    let mut buckets: BTreeMap<MultiIndex, Vec<(MultiIndex, u32)>> = BTreeMap::new();
    for (e, c) in f.terms() {
        let quot = MultiIndex::new(e.iter().map(|&x| (x as u64 / q) as u32).collect());
        let rem = MultiIndex::new(e.iter().map(|&x| (x as u64 % q) as u32).collect());
        buckets.entry(rem).or_default().push((quot, *c));
    }
    // Distinct terms give distinct (quotient, remainder) pairs, so no merging happens.
    let map = buckets
        .into_iter()
        .map(|(alpha, terms)| (alpha, ring.from_terms(terms)))
        .collect();
    Ok(PnDecomposition::sorted(ring, n, q, map))
}

/// `Σ_α frobenius(root_α, n) · x^α`.
pub fn reconstruct(dec: &PnDecomposition) -> Result<Polynomial> {
    let mut terms = Vec::new();
    for (alpha, root) in &dec.parts {
        for (e, c) in root.terms() {
            let lifted = e
                .checked_scale(dec.q)
                .and_then(|e| e.checked_add(alpha))
                .ok_or_else(|| Error::ResourceLimit("exponent overflow in reconstruction".into()))?;
            terms.push((lifted, *c));
        }
    }
    Ok(dec.ring.from_terms(terms))
}

/// `I_n(f)`: the roots of the p^n-decomposition.
pub fn ideal_i(f: &Polynomial, n: u32) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroInput("I_n(0) is undefined"));
    }
    let dec = decompose(f, n)?;
    Ideal::new(f.ring(), dec.parts.into_iter().map(|(_, r)| r).collect())
}

/// `J_n(f) = I_n(f)^{[p^n]}`: the pieces of the p^n-decomposition.
pub fn ideal_j(f: &Polynomial, n: u32) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroInput("J_n(0) is undefined"));
    }
    let dec = decompose(f, n)?;
    Ideal::new(f.ring(), dec.pieces()?.into_iter().map(|(_, g)| g).collect())
}
