//! Divided-power differential operators `Σ a_{αβ} x^α D_β` in right normal form.
//!
//! `D_β = D_{β1,1} ⋯ D_{βd,d}` acts by `D_β(x^γ) = C(γ, β)·x^{γ−β}`, the
//! characteristic-p meaning of `(1/β!) ∂^β`. An operator of level `n` (all
//! `β < p^n` componentwise) commutes with multiplication by p^n-th powers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::frobdecomp::decompose;
use crate::poly::{write_monomial, MultiIndex, Polynomial, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    ring: Ring,
    /// `(α, β) ↦ a_{αβ}`, nonzero coefficients only.
    terms: BTreeMap<(MultiIndex, MultiIndex), u32>,
}

impl DiffOp {
    pub fn zero(ring: &Ring) -> Self {
        DiffOp {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &Ring) -> Self {
        let z = MultiIndex::zero(ring.nvars());
        Self::term(ring, z.clone(), z, 1)
    }

    /// `c·x^α D_β`.
    pub fn term(ring: &Ring, alpha: MultiIndex, beta: MultiIndex, c: u32) -> Self {
        Self::from_terms(ring, [(alpha, beta, c)])
    }

    /// The divided-power derivation `D_β`.
    pub fn derivation(ring: &Ring, beta: MultiIndex) -> Self {
        Self::term(ring, MultiIndex::zero(ring.nvars()), beta, 1)
    }

    /// Multiplication by `g`.
    pub fn multiplication(g: &Polynomial) -> Self {
        let z = MultiIndex::zero(g.ring().nvars());
        Self::from_terms(
            g.ring(),
            g.terms().iter().map(|(e, c)| (e.clone(), z.clone(), *c)),
        )
    }

    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, u32)>,
    {
        let field = ring.field();
        let mut map: BTreeMap<(MultiIndex, MultiIndex), u32> = BTreeMap::new();
        for (a, b, c) in terms {
            assert!(a.len() == ring.nvars() && b.len() == ring.nvars(), "multi-index dimension");
            let slot = map.entry((a, b)).or_insert(0);
            *slot = field.add(*slot, field.reduce(c as u64));
        }
        map.retain(|_, c| *c != 0);
        DiffOp {
            ring: ring.clone(),
            terms: map,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, u32)> {
        self.terms.iter().map(|((a, b), c)| (a, b, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &MultiIndex, beta: &MultiIndex) -> u32 {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Smallest `n` with every `β` componentwise below `p^n`.
    pub fn level(&self) -> u32 {
        let top = self.terms.keys().map(|(_, b)| b.max_entry()).max().unwrap_or(0);
        level_of_entry(top, self.ring.p())
    }

    fn check(&self, other: &Ring) -> Result<()> {
        self.ring.check_compatible(other)
    }

    pub fn checked_add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check(&other.ring)?;
        let field = self.ring.field();
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let slot = terms.entry(k.clone()).or_insert(0);
            *slot = field.add(*slot, *c);
            if *slot == 0 {
                terms.remove(k);
            }
        }
        Ok(DiffOp {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.checked_add(&other.scale(self.ring.field().neg(1)))
    }

    pub fn scale(&self, c: u32) -> DiffOp {
        let field = self.ring.field();
        let c = c % field.p();
        DiffOp {
            ring: self.ring.clone(),
            terms: if c == 0 {
                BTreeMap::new()
            } else {
                self.terms
                    .iter()
                    .map(|(k, v)| (k.clone(), field.mul(*v, c)))
                    .collect()
            },
        }
    }

    /// `(h·) ∘ self`, which stays in right normal form.
    pub fn left_mul(&self, h: &Polynomial) -> Result<DiffOp> {
        self.check(h.ring())?;
        let field = self.ring.field();
        let mut acc: HashMap<(MultiIndex, MultiIndex), u32> = HashMap::new();
        for ((a, b), c) in &self.terms {
            for (e, hc) in h.terms() {
                let slot = acc.entry((a.add(e), b.clone())).or_insert(0);
                *slot = field.add(*slot, field.mul(*c, *hc));
            }
        }
        Ok(DiffOp::from_terms(
            &self.ring,
            acc.into_iter().map(|((a, b), c)| (a, b, c)),
        ))
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, g: &Polynomial) -> Result<Polynomial> {
        self.check(g.ring())?;
        let field = self.ring.field();
        let mut by_beta: BTreeMap<&MultiIndex, Vec<(&MultiIndex, u32)>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            by_beta.entry(b).or_default().push((a, *c));
        }
        let mut acc: HashMap<MultiIndex, u32> = HashMap::new();
        for (beta, mults) in by_beta {
            for (gamma, gc) in g.terms() {
                if !beta.le(gamma) {
                    continue;
                }
                let b = field.multi_binom(gamma, beta);
                if b == 0 {
                    continue;
                }
                let base = gamma.sub(beta);
                let coeff = field.mul(b, *gc);
                for (alpha, c) in &mults {
                    let slot = acc.entry(base.add(alpha)).or_insert(0);
                    *slot = field.add(*slot, field.mul(coeff, *c));
                }
            }
        }
        Ok(g.ring().from_terms(acc))
    }

    /// `self ∘ inner`, rewritten into right normal form with the divided-power
    /// Leibniz rule `D_β ∘ x^γ = Σ_{j ≤ β, γ} C(γ, j) x^{γ−j} D_{β−j}` and
    /// `D_a ∘ D_b = C(a+b, b) D_{a+b}`.
    pub fn compose(&self, inner: &DiffOp) -> Result<DiffOp> {
        self.check(&inner.ring)?;
        let field = self.ring.field();
        let mut acc: HashMap<(MultiIndex, MultiIndex), u32> = HashMap::new();
        for ((alpha, beta), a) in &self.terms {
            for ((gamma, delta), b) in &inner.terms {
                let ab = field.mul(*a, *b);
                let bound: Vec<u32> = beta.iter().zip(gamma.iter()).map(|(x, y)| *x.min(y)).collect();
                for j in box_iter(&bound) {
                    let c1 = field.multi_binom(gamma, &j);
                    if c1 == 0 {
                        continue;
                    }
                    let rest = beta.sub(&j);
                    let merged = rest.add(delta);
                    let c2 = field.multi_binom(&merged, delta);
                    if c2 == 0 {
                        continue;
                    }
                    let key = (alpha.add(&gamma.sub(&j)), merged);
                    let slot = acc.entry(key).or_insert(0);
                    *slot = field.add(*slot, field.mul(ab, field.mul(c1, c2)));
                }
            }
        }
        Ok(DiffOp::from_terms(
            &self.ring,
            acc.into_iter().map(|((a, b), c)| (a, b, c)),
        ))
    }
}

fn level_of_entry(mut top: u32, p: u32) -> u32 {
    let mut n = 0;
    while top > 0 {
        top /= p;
        n += 1;
    }
    n
}

/// All multi-indices `j` with `0 ≤ j ≤ bound` componentwise.
pub(crate) fn box_iter(bound: &[u32]) -> impl Iterator<Item = MultiIndex> + '_ {
    let total: u64 = bound.iter().map(|&b| b as u64 + 1).product();
    (0..total).map(move |mut k| {
        let v = bound
            .iter()
            .map(|&b| {
                let r = (k % (b as u64 + 1)) as u32;
                k /= b as u64 + 1;
                r
            })
            .collect();
        MultiIndex::new(v)
    })
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut parts = 0;
            if *c != 1 || (a.is_zero() && b.is_zero()) {
                write!(f, "{c}")?;
                parts += 1;
            }
            if !a.is_zero() {
                if parts > 0 {
                    write!(f, "*")?;
                }
                write_monomial(f, a)?;
                parts += 1;
            }
            if !b.is_zero() {
                if parts > 0 {
                    write!(f, "*")?;
                }
                write!(f, "D{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.ring.p())
    }
}

/// Checks `Q(h·g) = h·Q(g)` on every monomial `g` of degree `≤ probe_degree`
/// and on their sum. Requires `h ∈ F_p[x^{p^n}]` and `level(Q) ≤ n`.
pub fn commutes_with_pn(q: &DiffOp, h: &Polynomial, n: u32, probe_degree: u32) -> Result<bool> {
    q.check(h.ring())?;
    let pn = h.ring().prime_power(n)?;
    if h.terms().iter().any(|(e, _)| e.iter().any(|&x| !(x as u64).is_multiple_of(pn))) {
        return Err(Error::InvalidInput(format!("{h} is not a polynomial in x^{pn}")));
    }
    if q.level() > n {
        return Err(Error::InvalidInput(format!(
            "operator level {} exceeds {n}",
            q.level()
        )));
    }
    let ring = h.ring();
    let bound = vec![probe_degree; ring.nvars()];
    let mut sum = ring.zero();
    for e in box_iter(&bound) {
        if e.total() > probe_degree as u64 {
            continue;
        }
        let g = ring.monomial(e, 1);
        sum = &sum + &g;
        if q.apply(&(h * &g))? != h * &q.apply(&g)? {
            return Ok(false);
        }
    }
    Ok(q.apply(&(h * &sum))? == h * &q.apply(&sum)?)
}

/// The operators `Q_α ∈ D^{(n)}` with `Q_α(f) = f_α(x^{p^n})` for every `α` in
/// the support of the p^n-decomposition of `f`.
///
/// Built by the recursion `Q_β = D_β − Σ C(γ, β)·x^{γ−β}·Q_γ` over support
/// elements `γ ≥ β`, `γ ≠ β`, memoized from the top of the support down.
/// Every operator is checked by direct application before returning.
pub fn witness_generators(f: &Polynomial, n: u32) -> Result<BTreeMap<MultiIndex, DiffOp>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("witness operators of the zero polynomial"));
    }
    let ring = f.ring();
    let field = ring.field();
    let dec = decompose(f, n)?;
    let mut support: Vec<MultiIndex> = dec.support().cloned().collect();
    // Larger |γ| first, so every Q_γ a recursion step needs already exists.
    support.sort_by(|a, b| b.total().cmp(&a.total()).then_with(|| b.cmp(a)));

    let mut memo: BTreeMap<MultiIndex, DiffOp> = BTreeMap::new();
    for beta in &support {
        let mut q = DiffOp::derivation(ring, beta.clone());
        for (gamma, q_gamma) in &memo {
            if gamma == beta || !beta.le(gamma) {
                continue;
            }
            let c = field.multi_binom(gamma, beta);
            if c == 0 {
                continue;
            }
            let shifted = q_gamma.left_mul(&ring.monomial(gamma.sub(beta), c as u64))?;
            q = q.checked_sub(&shifted)?;
        }
        memo.insert(beta.clone(), q);
    }
    for (alpha, root) in dec.parts() {
        verify_witness(&memo[alpha], f, alpha, &root.frobenius(n)?)?;
    }
    Ok(memo)
}

/// The single operator `Q_α` from [`witness_generators`], computed on the part
/// of the support above `α` only.
///
/// The recursion is the inverse of the unitriangular matrix `C(γ, β)` on the
/// support; row `α` of that inverse is obtained by forward substitution
/// without forming the other rows.
pub fn witness_for(f: &Polynomial, n: u32, alpha: &MultiIndex) -> Result<DiffOp> {
    let dec = decompose(f, n)?;
    witness_from_decomposition(f, &dec, alpha)
}

pub(crate) fn witness_from_decomposition(
    f: &Polynomial,
    dec: &crate::frobdecomp::PnDecomposition,
    alpha: &MultiIndex,
) -> Result<DiffOp> {
    let ring = f.ring();
    let field = ring.field();
    let root = dec
        .root(alpha)
        .ok_or_else(|| Error::InvalidInput(format!("{alpha} is not in the decomposition support")))?;
    let mut above: Vec<&MultiIndex> = dec.support().filter(|g| alpha.le(g)).collect();
    above.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));

    // y_δ = [δ = α] − Σ_{β < δ} y_β C(δ, β)
    let mut solved: Vec<(&MultiIndex, u32)> = Vec::with_capacity(above.len());
    for delta in &above {
        let mut y = if *delta == alpha { 1 } else { 0 };
        for (beta, yb) in &solved {
            if *beta == *delta || !beta.le(delta) {
                continue;
            }
            let c = field.multi_binom(delta, beta);
            if c != 0 {
                y = field.sub(y, field.mul(*yb, c));
            }
        }
        if y != 0 {
            solved.push((delta, y));
        }
    }
    let q = DiffOp::from_terms(
        ring,
        solved
            .into_iter()
            .map(|(delta, y)| (delta.sub(alpha), delta.clone(), y)),
    );
    verify_witness(&q, f, alpha, &root.frobenius(dec.level())?)?;
    Ok(q)
}

fn verify_witness(q: &DiffOp, f: &Polynomial, alpha: &MultiIndex, piece: &Polynomial) -> Result<()> {
    if &q.apply(f)? != piece {
        return Err(Error::internal(format!(
            "witness operator for {alpha} does not reproduce its piece"
        )));
    }
    Ok(())
}
