//! Buchberger's algorithm over F_p with cofactor tracking.
//!
//! Every basis element remembers its expression in the original generators,
//! so membership answers come with explicit witnesses `f = Σ h_j·g_j`.
//! Pairs are pruned with the Gebauer–Möller criteria and selected by the
//! normal strategy (smallest lcm first, ties by pair index).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::{MonomialOrder, MultiIndex, Polynomial, Ring};

/// Multivariate division with quotients.
///
/// Repeatedly takes the largest remaining term; if some divisor's leading term
/// divides it, the first such divisor (in list order) cancels it, otherwise the
/// term moves to the remainder. Returns `(remainder, quotients)` with
/// `f = Σ q_i·d_i + r`, all results in `order`.
pub fn divide(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: MonomialOrder,
) -> Result<(Polynomial, Vec<Polynomial>)> {
    let divs = divisors
        .iter()
        .map(|d| {
            f.ring().check_compatible(d.ring())?;
            if d.is_zero() {
                return Err(Error::InvalidInput("division by the zero polynomial".into()));
            }
            Ok(d.with_order(order))
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Polynomial> = divs.iter().collect();
    Ok(divide_refs(&f.with_order(order), &refs))
}

/// Division against divisors already in `f`'s order; divisors must be nonzero.
fn divide_refs(f: &Polynomial, divisors: &[&Polynomial]) -> (Polynomial, Vec<Polynomial>) {
    let ring = f.ring();
    let field = ring.field();
    let order = ring.order();
    let mut work: BTreeMap<Vec<i64>, (MultiIndex, u32)> = f
        .terms()
        .iter()
        .map(|(e, c)| (order.sort_key(e), (e.clone(), *c)))
        .collect();
    let leads: Vec<(MultiIndex, u32)> = divisors
        .iter()
        .map(|d| {
            let (e, c) = d.leading_term().expect("nonzero divisor");
            (e.clone(), field.inv(c).expect("nonzero leading coefficient"))
        })
        .collect();
    let mut quotients: Vec<Vec<(MultiIndex, u32)>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();

    while let Some((_, (e, c))) = work.pop_last() {
        let hit = leads.iter().position(|(lt, _)| lt.divides(&e));
        let Some(i) = hit else {
            remainder.push((e, c));
            continue;
        };
        let (lt, lc_inv) = &leads[i];
        let m = e.sub(lt);
        let factor = field.mul(c, *lc_inv);
        quotients[i].push((m.clone(), factor));
        for (de, dc) in &divisors[i].terms()[1..] {
            let prod = de.add(&m);
            let sub = field.mul(factor, *dc);
            let key = order.sort_key(&prod);
            match work.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let v = field.sub(slot.get().1, sub);
                    if v == 0 {
                        slot.remove();
                    } else {
                        slot.get_mut().1 = v;
                    }
                }
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert((prod, field.neg(sub)));
                }
            }
        }
    }
    let quotients = quotients.into_iter().map(|t| ring.from_terms(t)).collect();
    (ring.from_terms(remainder), quotients)
}

/// Sparse combination `Σ_j c_j·g_j` of the original generators.
type Combination = BTreeMap<usize, Polynomial>;

fn comb_sub_mul(target: &mut Combination, q: &Polynomial, source: &Combination) {
    if q.is_zero() {
        return;
    }
    for (j, c) in source {
        let delta = q * c;
        let updated = match target.get(j) {
            Some(old) => old - &delta,
            None => delta.neg(),
        };
        if updated.is_zero() {
            target.remove(j);
        } else {
            target.insert(*j, updated);
        }
    }
}

fn comb_scale_shift(source: &Combination, m: &MultiIndex, c: u32) -> Combination {
    source
        .iter()
        .map(|(j, p)| (*j, p.mul_term(m, c)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

#[derive(Clone)]
struct Tracked {
    poly: Polynomial,
    comb: Combination,
}

impl Tracked {
    fn lead(&self) -> &MultiIndex {
        self.poly.leading_term().expect("nonzero basis element").0
    }

    fn make_monic(&mut self) {
        let (_, lc) = self.poly.leading_term().expect("nonzero");
        if lc != 1 {
            let inv = self.poly.ring().field().inv(lc).expect("nonzero");
            self.poly = self.poly.scale(inv);
            for p in self.comb.values_mut() {
                *p = p.scale(inv);
            }
        }
    }
}

/// Reduced Gröbner basis together with its expression in the input generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: Vec<Polynomial>,
    /// `basis[i] = Σ_j transform[i][j] · generators[j]`.
    transform: Vec<Vec<Polynomial>>,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Monic, reduced, sorted ascending by leading monomial.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn transform(&self) -> &[Vec<Polynomial>] {
        &self.transform
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ring.check_compatible(f.ring())?;
        let refs: Vec<&Polynomial> = self.basis.iter().collect();
        Ok(divide_refs(&f.with_order(self.order()), &refs).0)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Cofactors over the original generators, or `None` when `f` is not a member.
    /// The identity `f = Σ h_j·g_j` is re-expanded before returning.
    pub fn cofactors(&self, f: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
        self.ring.check_compatible(f.ring())?;
        let f = f.with_order(self.order());
        let refs: Vec<&Polynomial> = self.basis.iter().collect();
        let (r, quotients) = divide_refs(&f, &refs);
        if !r.is_zero() {
            return Ok(None);
        }
        let mut cof = vec![self.ring.zero(); self.generators.len()];
        for (q, row) in quotients.iter().zip(&self.transform) {
            if q.is_zero() {
                continue;
            }
            for (h, t) in cof.iter_mut().zip(row) {
                if !t.is_zero() {
                    *h = &*h + &(q * t);
                }
            }
        }
        let check = combine(&self.ring, &cof, &self.generators);
        if check != f {
            return Err(Error::internal(format!(
                "cofactor re-expansion mismatch for {f}"
            )));
        }
        Ok(Some(cof))
    }
}

/// `Σ h_j·g_j`.
pub fn combine(ring: &Ring, cofactors: &[Polynomial], generators: &[Polynomial]) -> Polynomial {
    cofactors
        .iter()
        .zip(generators)
        .filter(|(h, _)| !h.is_zero())
        .fold(ring.zero(), |acc, (h, g)| &acc + &(h * g))
}

fn s_polynomial(a: &Tracked, b: &Tracked) -> Tracked {
    let lcm = a.lead().lcm(b.lead());
    let ma = lcm.sub(a.lead());
    let mb = lcm.sub(b.lead());
    // Both operands are monic.
    let poly = &a.poly.mul_term(&ma, 1) - &b.poly.mul_term(&mb, 1);
    let mut comb = comb_scale_shift(&a.comb, &ma, 1);
    let one = a.poly.ring().monomial(mb, 1);
    comb_sub_mul(&mut comb, &one, &b.comb);
    Tracked { poly, comb }
}

fn reduce_tracked(h: &Tracked, storage: &[Tracked], active: &[usize]) -> Tracked {
    let refs: Vec<&Polynomial> = active.iter().map(|&i| &storage[i].poly).collect();
    let (r, quotients) = divide_refs(&h.poly, &refs);
    let mut comb = h.comb.clone();
    for (q, &i) in quotients.iter().zip(active) {
        comb_sub_mul(&mut comb, q, &storage[i].comb);
    }
    Tracked { poly: r, comb }
}

/// Gebauer–Möller pair update after inserting `storage[h]`.
fn update(
    storage: &[Tracked],
    active: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
    h: usize,
) {
    let lt_h = storage[h].lead().clone();
    let lcm_with = |g: usize| lt_h.lcm(storage[g].lead());

    let candidates: Vec<usize> = active.clone();
    let mut kept: Vec<usize> = Vec::new();
    for (pos, &g1) in candidates.iter().enumerate() {
        let l1 = lcm_with(g1);
        let coprime = lt_h.is_coprime(storage[g1].lead());
        let dominated = candidates[pos + 1..]
            .iter()
            .chain(kept.iter())
            .any(|&g2| lcm_with(g2).divides(&l1));
        if coprime || !dominated {
            kept.push(g1);
        }
    }
    let new_pairs: Vec<(usize, usize)> = kept
        .into_iter()
        .filter(|&g| !lt_h.is_coprime(storage[g].lead()))
        .map(|g| (g.min(h), g.max(h)))
        .collect();

    pairs.retain(|&(a, b)| {
        let l = storage[a].lead().lcm(storage[b].lead());
        !lt_h.divides(&l) || lcm_with(a) == l || lcm_with(b) == l
    });
    pairs.extend(new_pairs);

    active.retain(|&g| !lt_h.divides(storage[g].lead()));
    active.push(h);
}

/// Reduced Gröbner basis of `ideal` under `order`, with transform matrix.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> Result<GroebnerBasis> {
    if ideal.is_zero() {
        return Err(Error::ZeroInput("Gröbner basis of the zero ideal"));
    }
    let ring = ideal.ring().reordered(order);
    let generators: Vec<Polynomial> = ideal.generators().iter().map(|g| g.with_order(order)).collect();

    let mut storage: Vec<Tracked> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    fn insert(
        t: Tracked,
        storage: &mut Vec<Tracked>,
        active: &mut Vec<usize>,
        pairs: &mut Vec<(usize, usize)>,
    ) {
        let mut t = reduce_tracked(&t, storage, active);
        if t.poly.is_zero() {
            return;
        }
        t.make_monic();
        storage.push(t);
        let h = storage.len() - 1;
        update(storage, active, pairs, h);
    }

    for (j, g) in generators.iter().enumerate() {
        let comb = Combination::from([(j, ring.one())]);
        insert(
            Tracked {
                poly: g.clone(),
                comb,
            },
            &mut storage,
            &mut active,
            &mut pairs,
        );
    }

    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&x, &y| {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                let lx = storage[a].lead().lcm(storage[b].lead());
                let ly = storage[c].lead().lcm(storage[d].lead());
                order.cmp(&lx, &ly).then((a, b).cmp(&(c, d)))
            })
            .expect("nonempty");
        let (a, b) = pairs.swap_remove(pick);
        let s = s_polynomial(&storage[a], &storage[b]);
        insert(s, &mut storage, &mut active, &mut pairs);
    }

    // `active` is a minimal basis; inter-reduce the tails.
    let mut elems: Vec<Tracked> = active.iter().map(|&i| storage[i].clone()).collect();
    elems.sort_by(|x, y| order.cmp(x.lead(), y.lead()));
    for i in 0..elems.len() {
        let others: Vec<Tracked> = elems
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, t)| t.clone())
            .collect();
        let idx: Vec<usize> = (0..others.len()).collect();
        let mut reduced = reduce_tracked(&elems[i], &others, &idx);
        reduced.make_monic();
        elems[i] = reduced;
    }

    let m = generators.len();
    let mut basis = Vec::with_capacity(elems.len());
    let mut transform = Vec::with_capacity(elems.len());
    for t in elems {
        let mut row = vec![ring.zero(); m];
        for (j, c) in t.comb {
            row[j] = c;
        }
        if combine(&ring, &row, &generators) != t.poly {
            return Err(Error::internal("Gröbner transform does not reproduce the basis"));
        }
        basis.push(t.poly);
        transform.push(row);
    }
    Ok(GroebnerBasis {
        ring,
        generators,
        basis,
        transform,
    })
}

/// Membership with explicit cofactors over the generators of `ideal`.
pub fn membership(f: &Polynomial, ideal: &Ideal, order: MonomialOrder) -> Result<Option<Vec<Polynomial>>> {
    let gb = buchberger(ideal, order)?;
    let cof = gb.cofactors(f)?;
    Ok(cof.map(|hs| hs.into_iter().map(|h| h.with_order(ideal.ring().order())).collect()))
}

/// Equality of ideals via identical reduced Gröbner bases.
pub fn ideal_equal(a: &Ideal, b: &Ideal, order: MonomialOrder) -> Result<bool> {
    a.ring().check_compatible(b.ring())?;
    let ga = buchberger(a, order)?;
    let gb = buchberger(b, order)?;
    Ok(ga.basis() == gb.basis())
}

/// Every generator of `small` lies in the ideal with basis `big`.
pub fn is_subideal(small: &Ideal, big: &GroebnerBasis) -> Result<bool> {
    for g in small.generators() {
        if !big.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::ring;

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap()
    }

    fn show(ps: &[Polynomial]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn divide_examples() {
        let r = ring(3, 2);
        let g = MonomialOrder::Grevlex;
        let (rem, q) = divide(&r.parse("x1^2").unwrap(), &[r.parse("x1").unwrap()], g).unwrap();
        assert!(rem.is_zero());
        assert_eq!(show(&q), vec!["x1"]);

        let (rem, q) = divide(&r.parse("x1+x2").unwrap(), &[r.parse("x1^2").unwrap()], g).unwrap();
        assert_eq!(rem, r.parse("x1+x2").unwrap());
        assert!(q[0].is_zero());

        let (rem, q) = divide(
            &r.parse("x1^2*x2 + x2").unwrap(),
            &[r.parse("x1^2 + 1").unwrap()],
            g,
        )
        .unwrap();
        assert!(rem.is_zero());
        assert_eq!(show(&q), vec!["x2"]);

        assert!(divide(&r.one(), &[r.zero()], g).is_err());
    }

    #[test]
    fn division_identity_holds() {
        let r = ring(5, 3);
        let f = r.parse("x1^3*x2 + 2*x2^2*x3 + x1 + 4").unwrap();
        let divs = vec![r.parse("x1*x2 + 3").unwrap(), r.parse("x2^2 - x3").unwrap()];
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let (rem, q) = divide(&f, &divs, order).unwrap();
            let back = &combine(&r, &q, &divs) + &rem;
            assert_eq!(back.with_order(r.order()), f);
            for (e, _) in rem.terms() {
                for d in &divs {
                    let d = d.with_order(order);
                    assert!(!d.leading_term().unwrap().0.divides(e));
                }
            }
        }
    }

    #[test]
    fn buchberger_examples() {
        let r = ring(3, 2);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let gb = buchberger(&ideal(&r, &["1", "x1"]), order).unwrap();
            assert_eq!(show(gb.basis()), vec!["1"]);
            assert!(gb.is_unit());
            let gb = buchberger(&ideal(&r, &["x1 - x2", "x2"]), order).unwrap();
            assert_eq!(show(gb.basis()), vec!["x2", "x1"]);
        }
        let gb = buchberger(&ideal(&r, &["x1^2", "x1*x2"]), MonomialOrder::Grevlex).unwrap();
        assert_eq!(show(gb.basis()), vec!["x1*x2", "x1^2"]);
        assert!(matches!(
            buchberger(&Ideal::new(&r, vec![r.zero()]).unwrap(), MonomialOrder::Grevlex),
            Err(Error::ZeroInput(_))
        ));
    }

    #[test]
    fn transform_reproduces_basis() {
        let r = ring(5, 3);
        let i = ideal(&r, &["x1^2 + x2*x3", "x1*x2 - x3^2", "x2^3 + x1"]);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let gb = buchberger(&i, order).unwrap();
            for (b, row) in gb.basis().iter().zip(gb.transform()) {
                assert_eq!(&combine(gb.ring(), row, gb.generators()), b);
                assert_eq!(b.leading_term().unwrap().1, 1);
            }
            // Buchberger criterion on the output.
            let tracked: Vec<Tracked> = gb
                .basis()
                .iter()
                .map(|p| Tracked {
                    poly: p.clone(),
                    comb: Combination::new(),
                })
                .collect();
            for a in 0..tracked.len() {
                for b in a + 1..tracked.len() {
                    let s = s_polynomial(&tracked[a], &tracked[b]);
                    assert!(gb.reduce(&s.poly).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let r = ring(3, 2);
        let g = MonomialOrder::Grevlex;
        let cof = membership(&r.parse("x1+x2").unwrap(), &ideal(&r, &["x1", "x2"]), g)
            .unwrap()
            .unwrap();
        assert_eq!(show(&cof), vec!["1", "1"]);
        assert!(membership(&r.one(), &ideal(&r, &["x1"]), g).unwrap().is_none());
        let cof = membership(&r.parse("x1^3").unwrap(), &ideal(&r, &["x1^2"]), g)
            .unwrap()
            .unwrap();
        assert_eq!(show(&cof), vec!["x1"]);
    }

    #[test]
    fn ideal_equality_examples() {
        let r = ring(3, 2);
        let g = MonomialOrder::Grevlex;
        assert!(ideal_equal(&ideal(&r, &["x1", "x2"]), &ideal(&r, &["x2", "x1 + x2"]), g).unwrap());
        assert!(!ideal_equal(&ideal(&r, &["x1"]), &ideal(&r, &["x1^2"]), g).unwrap());
        let r2 = ring(2, 4);
        let quadric = r2.parse("x1^2+x2^2+x3^2+x4^2").unwrap();
        let i = crate::frobdecomp::ideal_i(&quadric, 1).unwrap();
        assert!(ideal_equal(&ideal(&r2, &["x1+x2+x3+x4"]), &i, g).unwrap());
    }
}
