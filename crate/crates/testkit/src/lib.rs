//! Reference arithmetic for cross-checking `frobgen-core`.
//!
//! Everything here is deliberately naive: schoolbook products, repeated
//! multiplication for powers, binomials from a Pascal table, and ideal
//! membership by Gaussian elimination on a degree-bounded Macaulay matrix.
//! Outside [`suites`], none of it calls into the library except to convert
//! values.

use std::collections::{BTreeMap, HashMap};

use frobgen_core::poly::{MultiIndex, Polynomial, Ring};
use rand::rngs::StdRng;
use rand::Rng;

pub mod suites;

pub type Exp = Vec<u32>;

/// Sparse polynomial over F_p as an exponent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naive {
    pub p: u64,
    pub d: usize,
    pub terms: BTreeMap<Exp, u64>,
}

impl Naive {
    pub fn zero(p: u64, d: usize) -> Self {
        Naive {
            p,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u64, d: usize) -> Self {
        Naive::monomial(p, vec![0; d], 1)
    }

    pub fn monomial(p: u64, e: Exp, c: u64) -> Self {
        let d = e.len();
        let mut n = Naive::zero(p, d);
        n.add_term(e, c);
        n
    }

    pub fn from_poly(f: &Polynomial) -> Self {
        let ring = f.ring();
        let mut n = Naive::zero(ring.p() as u64, ring.nvars());
        for (e, c) in f.terms() {
            n.add_term(e.as_slice().to_vec(), *c as u64);
        }
        n
    }

    pub fn to_poly(&self, ring: &Ring) -> Polynomial {
        ring.from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.clone()), *c as u32)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(-1)
    }

    pub fn add_term(&mut self, e: Exp, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot = (*slot + c) % p;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Naive) -> Naive {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Naive) -> Naive {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, c: u64) -> Naive {
        let mut out = Naive::zero(self.p, self.d);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * (c % self.p));
        }
        out
    }

    pub fn mul(&self, other: &Naive) -> Naive {
        let mut acc: HashMap<Exp, u64> = HashMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exp = a.iter().zip(b).map(|(u, v)| u + v).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + x * y) % self.p;
            }
        }
        let mut out = Naive::zero(self.p, self.d);
        for (e, c) in acc {
            out.add_term(e, c);
        }
        out
    }

    /// `self^m` by `m` successive multiplications.
    pub fn pow(&self, m: u64) -> Naive {
        let mut acc = Naive::one(self.p, self.d);
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `x_i ↦ x_i^q`.
    pub fn inflate(&self, q: u32) -> Naive {
        let mut out = Naive::zero(self.p, self.d);
        for (e, c) in &self.terms {
            out.add_term(e.iter().map(|x| x * q).collect(), *c);
        }
        out
    }
}

/// Binomial coefficients mod p from a Pascal triangle that grows on demand.
pub struct Pascal {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl Pascal {
    pub fn new(p: u64) -> Self {
        Pascal {
            p,
            rows: vec![vec![1]],
        }
    }

    pub fn binom(&mut self, a: u32, b: u32) -> u64 {
        if b > a {
            return 0;
        }
        while self.rows.len() <= a as usize {
            let prev = self.rows.last().expect("nonempty");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(1);
            for w in prev.windows(2) {
                row.push((w[0] + w[1]) % self.p);
            }
            row.push(1);
            self.rows.push(row);
        }
        self.rows[a as usize][b as usize]
    }

    pub fn multi(&mut self, a: &[u32], b: &[u32]) -> u64 {
        a.iter()
            .zip(b)
            .fold(1, |acc, (&x, &y)| acc * self.binom(x, y) % self.p)
    }
}

/// A differential operator as a list of `(x-exponent, D-index, coefficient)`.
pub type OpTerms = Vec<(Exp, Exp, u64)>;

/// `Σ c·x^a·D_b(g)` with `D_b(x^γ) = C(γ, b)·x^{γ−b}`.
pub fn apply_op(op: &[(Exp, Exp, u64)], g: &Naive, pascal: &mut Pascal) -> Naive {
    let mut out = Naive::zero(g.p, g.d);
    for (a, b, c) in op {
        for (gamma, gc) in &g.terms {
            if gamma.iter().zip(b).any(|(x, y)| x < y) {
                continue;
            }
            let coeff = pascal.multi(gamma, b) * gc % g.p * c % g.p;
            let e: Exp = gamma
                .iter()
                .zip(b)
                .zip(a)
                .map(|((x, y), z)| x - y + z)
                .collect();
            out.add_term(e, coeff);
        }
    }
    out
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

fn monomials_up_to(d: usize, deg: i64) -> Vec<Exp> {
    let mut out = Vec::new();
    if deg < 0 {
        return out;
    }
    fn rec(d: usize, left: u32, cur: &mut Exp, out: &mut Vec<Exp>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(d, left - k, cur, out);
            cur.pop();
        }
    }
    rec(d, deg as u32, &mut Vec::new(), &mut out);
    out
}

/// Decides `f ∈ span{m·g_j : deg(m·g_j) ≤ bound}` by elimination and returns
/// cofactors when it is. A positive answer proves membership; a negative one
/// proves non-membership once `bound` exceeds every degree a representation
/// could need.
pub fn membership_oracle(f: &Naive, gens: &[Naive], bound: i64) -> Option<Vec<Naive>> {
    let (p, d) = (f.p, f.d);
    let mut columns: HashMap<Exp, usize> = HashMap::new();
    let col = |e: &Exp, columns: &mut HashMap<Exp, usize>| {
        let n = columns.len();
        *columns.entry(e.clone()).or_insert(n)
    };
    // Row r is multiplier m_r times generator j_r.
    let mut origin: Vec<(usize, Exp)> = Vec::new();
    type Vector = BTreeMap<usize, u64>;
    let mut pivots: BTreeMap<usize, (Vector, Vector)> = BTreeMap::new();

    let reduce = |mut v: Vector, mut comb: Vector, pivots: &BTreeMap<usize, (Vector, Vector)>| {
        loop {
            let lead = v.iter().find(|(k, _)| pivots.contains_key(k)).map(|(k, c)| (*k, *c));
            let Some((k, c)) = lead else { break };
            let (row, rcomb) = &pivots[&k];
            for (i, x) in row {
                let slot = v.entry(*i).or_insert(0);
                *slot = (*slot + p - c * x % p) % p;
                if *slot == 0 {
                    v.remove(i);
                }
            }
            for (i, x) in rcomb {
                let slot = comb.entry(*i).or_insert(0);
                *slot = (*slot + p - c * x % p) % p;
                if *slot == 0 {
                    comb.remove(i);
                }
            }
        }
        (v, comb)
    };

    for (j, g) in gens.iter().enumerate() {
        for m in monomials_up_to(d, bound - g.degree()) {
            let r = origin.len();
            origin.push((j, m.clone()));
            let mut v = Vector::new();
            for (e, c) in &g.terms {
                let prod: Exp = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                v.insert(col(&prod, &mut columns), *c);
            }
            let (v, comb) = reduce(v, Vector::from([(r, 1)]), &pivots);
            if let Some((&k, &c)) = v.iter().next() {
                let inv = inv_mod(c, p);
                let norm = |x: Vector| x.into_iter().map(|(i, y)| (i, y * inv % p)).collect();
                pivots.insert(k, (norm(v), norm(comb)));
            }
        }
    }
    let mut target = Vector::new();
    for (e, c) in &f.terms {
        if !columns.contains_key(e) {
            // A monomial no row touches can never cancel.
            return None;
        }
        target.insert(col(e, &mut columns), *c);
    }
    let (rest, comb) = reduce(target, Vector::new(), &pivots);
    if !rest.is_empty() {
        return None;
    }
    // f + Σ comb_r·row_r = 0.
    let mut cof = vec![Naive::zero(p, d); gens.len()];
    for (r, c) in comb {
        let (j, m) = &origin[r];
        cof[*j].add_term(m.clone(), (p - c) % p);
    }
    Some(cof)
}

pub fn combine(cofactors: &[Naive], gens: &[Naive]) -> Naive {
    let mut acc = Naive::zero(gens[0].p, gens[0].d);
    for (h, g) in cofactors.iter().zip(gens) {
        acc = acc.add(&h.mul(g));
    }
    acc
}

/// A random polynomial with at most `max_terms` terms of degree `≤ max_deg`.
pub fn random_poly(rng: &mut StdRng, ring: &Ring, max_deg: u32, max_terms: usize) -> Polynomial {
    let p = ring.p();
    let d = ring.nvars();
    let n = rng.gen_range(0..=max_terms);
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let mut left = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; d];
        for slot in e.iter_mut() {
            let k = rng.gen_range(0..=left);
            *slot = k;
            left -= k;
        }
        terms.push((MultiIndex::new(e), rng.gen_range(1..p)));
    }
    ring.from_terms(terms)
}

pub fn random_nonconstant(rng: &mut StdRng, ring: &Ring, max_deg: u32, max_terms: usize) -> Polynomial {
    loop {
        let f = random_poly(rng, ring, max_deg, max_terms.max(1));
        if !f.is_constant() {
            return f;
        }
    }
}

pub fn random_index(rng: &mut StdRng, d: usize, below: u32) -> MultiIndex {
    MultiIndex::new((0..d).map(|_| rng.gen_range(0..below)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_small_values() {
        let mut t = Pascal::new(7);
        assert_eq!(t.binom(5, 2), 3);
        assert_eq!(t.binom(7, 3), 0);
        assert_eq!(t.binom(3, 5), 0);
    }

    #[test]
    fn oracle_finds_combinations() {
        let p = 5;
        let x = Naive::monomial(p, vec![1, 0], 1);
        let y = Naive::monomial(p, vec![0, 1], 1);
        let f = x.mul(&y).add(&y.pow(2).scale(3));
        let cof = membership_oracle(&f, &[x.clone(), y.clone()], 2).unwrap();
        assert_eq!(combine(&cof, &[x.clone(), y.clone()]), f);
        assert!(membership_oracle(&Naive::one(p, 2), &[x, y], 4).is_none());
    }
}
