//! The descending chain `I_n(f^{p^n − 1})` and its first consecutive equality.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::frobdecomp::ideal_i;
use crate::groebner::{buchberger, is_subideal, GroebnerBasis};
use crate::ideal::Ideal;
use crate::poly::{MonomialOrder, MultiIndex, Polynomial};

/// Mechanical bounds on the search; exceeding any of them is a `ResourceLimit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_level: u32,
    /// Bound on `p^n · deg f` for every power that is formed.
    pub exponent_cap: u64,
    /// Bound on the number of terms of any intermediate power.
    pub term_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_level: 5,
            exponent_cap: 4096,
            term_cap: 5_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_exponent(&self, f: &Polynomial, n: u32) -> Result<u64> {
        let q = f.ring().prime_power(n)?;
        let deg = f.degree().max(0) as u64;
        match q.checked_mul(deg) {
            Some(v) if v <= self.exponent_cap => Ok(q),
            _ => Err(Error::ResourceLimit(format!(
                "{}^{n} · deg f = {}^{n} · {deg} exceeds the exponent cap {}",
                f.ring().p(),
                f.ring().p(),
                self.exponent_cap
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub n: u32,
    pub ideal: Ideal,
    pub basis: GroebnerBasis,
    pub we_dim: usize,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    pub f: Polynomial,
    pub levels: Vec<ChainLevel>,
    /// First `n ≥ 2` with `I_{n−1} = I_n`.
    pub s: u32,
    /// `I_{s−1}`.
    pub stable_ideal: Ideal,
}

fn require_nonconstant(f: &Polynomial) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroInput("the chain of a zero polynomial is undefined"));
    }
    if f.is_constant() {
        return Err(Error::ConstantInput("the chain of a constant is degenerate"));
    }
    Ok(())
}

/// `I_n(f^{p^n − 1})`.
pub fn chain_ideal(f: &Polynomial, n: u32, limits: &Limits) -> Result<Ideal> {
    require_nonconstant(f)?;
    if n == 0 {
        return Err(Error::InvalidInput("chain levels start at 1".into()));
    }
    let q = limits.check_exponent(f, n)?;
    let power = f.pow_capped(q - 1, limits.term_cap)?;
    ideal_i(&power, n)
}

/// Computes the chain level by level and stops at the first consecutive equality.
pub fn stabilization(f: &Polynomial, limits: &Limits) -> Result<ChainResult> {
    require_nonconstant(f)?;
    if limits.max_level < 2 {
        return Err(Error::InvalidInput("max_level must be at least 2".into()));
    }
    let e = f.degree() as u64;
    let order = f.ring().order();
    let mut levels: Vec<ChainLevel> = Vec::new();
    for n in 1..=limits.max_level {
        let ideal = chain_ideal(f, n, limits)?;
        if let Some(bad) = ideal.generators().iter().find(|g| g.degree() as u64 >= e) {
            return Err(Error::internal(format!(
                "chain generator {bad} at level {n} breaks the degree bound < {e}"
            )));
        }
        let basis = buchberger(&ideal, order)?;
        let we_dim = we_dimension(&ideal, e)?;
        if let Some(prev) = levels.last() {
            if !is_subideal(&ideal, &prev.basis)? {
                return Err(Error::internal(format!("chain ascends at level {n}")));
            }
            if prev.basis.basis() == basis.basis() {
                let stable_ideal = prev.ideal.clone();
                levels.push(ChainLevel {
                    n,
                    ideal,
                    basis,
                    we_dim,
                });
                return Ok(ChainResult {
                    f: f.clone(),
                    levels,
                    s: n,
                    stable_ideal,
                });
            }
        }
        levels.push(ChainLevel {
            n,
            ideal,
            basis,
            we_dim,
        });
    }
    Err(Error::LevelExceeded {
        max_level: limits.max_level,
        levels,
    })
}

/// All exponent vectors in `d` variables of total degree `< bound`, in a fixed order.
fn monomials_below(d: usize, bound: u64) -> Vec<MultiIndex> {
    fn rec(d: usize, i: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if i == d {
            out.push(MultiIndex::new(cur.clone()));
            return;
        }
        for k in 0..=left {
            cur.push(k as u32);
            rec(d, i + 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if bound > 0 {
        rec(d, 0, bound - 1, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// `dim (I ∩ W_e)`, where `W_e` is the space of polynomials of degree `< e`.
///
/// Computed as the span of `{m·g : deg(m·g) < e}` over a grevlex Gröbner
/// basis `g`. For an arbitrary generating set that span can miss elements
/// whose degree drops through cancellation; over a degree-compatible basis
/// every element of `I ∩ W_e` has a standard representation inside it.
pub fn we_dimension(ideal: &Ideal, e: u64) -> Result<usize> {
    let d = ideal.ring().nvars();
    let field = ideal.ring().field().clone();
    for g in ideal.generators() {
        if g.degree() as u64 >= e {
            return Err(Error::DegreeBoundViolation {
                degree: g.degree(),
                bound: e,
            });
        }
    }
    if ideal.is_zero() {
        return Ok(0);
    }
    let basis = buchberger(ideal, MonomialOrder::Grevlex)?;
    let columns: HashMap<MultiIndex, usize> = monomials_below(d, e)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u32>> = BTreeMap::new();
    for g in basis.basis() {
        if g.degree() as u64 >= e {
            continue;
        }
        let room = e - 1 - g.degree() as u64;
        for m in monomials_below(d, room + 1) {
            let mut row: BTreeMap<usize, u32> = g
                .terms()
                .iter()
                .map(|(ge, c)| (columns[&ge.add(&m)], *c))
                .collect();
            while let Some((&col, &val)) = row.iter().next() {
                match pivots.get(&col) {
                    Some(pivot) => {
                        for (&k, &v) in pivot {
                            let slot = row.entry(k).or_insert(0);
                            *slot = field.sub(*slot, field.mul(val, v));
                            if *slot == 0 {
                                row.remove(&k);
                            }
                        }
                    }
                    None => {
                        let inv = field.inv(val)?;
                        for v in row.values_mut() {
                            *v = field.mul(*v, inv);
                        }
                        pivots.insert(col, row);
                        break;
                    }
                }
            }
        }
    }
    Ok(pivots.len())
}
