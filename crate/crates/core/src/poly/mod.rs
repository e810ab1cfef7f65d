//! Sparse multivariate polynomials over F_p.
//!
//! A [`Polynomial`] is a list of `(exponent, coefficient)` pairs with nonzero
//! coefficients, kept sorted in descending order under the ring's
//! [`MonomialOrder`]. The zero polynomial is the empty list.

mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use monomial::{MonomialOrder, MultiIndex};

use crate::error::{Error, Result};
use crate::gfp::{FpScalar, PrimeField};

/// The polynomial ring `F_p[x1, …, xd]` with a chosen term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    field: PrimeField,
    nvars: usize,
    order: MonomialOrder,
}

impl Ring {
    pub fn new(p: u64, nvars: usize) -> Result<Self> {
        Self::with_order(p, nvars, MonomialOrder::default())
    }

    pub fn with_order(p: u64, nvars: usize, order: MonomialOrder) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput("a ring needs at least one variable".into()));
        }
        Ok(Ring {
            field: PrimeField::new(p)?,
            nvars,
            order,
        })
    }

    pub fn from_field(field: PrimeField, nvars: usize, order: MonomialOrder) -> Self {
        assert!(nvars > 0);
        Ring {
            field,
            nvars,
            order,
        }
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn reordered(&self, order: MonomialOrder) -> Ring {
        Ring {
            order,
            ..self.clone()
        }
    }

    /// Same prime and number of variables; the term order may differ.
    pub fn compatible(&self, other: &Ring) -> bool {
        self.field == other.field && self.nvars == other.nvars
    }

    pub fn check_compatible(&self, other: &Ring) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "F_{}[x1..x{}] vs F_{}[x1..x{}]",
                self.p(),
                self.nvars,
                other.p(),
                other.nvars
            )))
        }
    }

    /// `p^n`, failing with `ResourceLimit` on overflow.
    pub fn prime_power(&self, n: u32) -> Result<u64> {
        self.field
            .checked_power(n)
            .ok_or_else(|| Error::ResourceLimit(format!("{}^{} overflows", self.p(), n)))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> Polynomial {
        self.monomial(MultiIndex::zero(self.nvars), c)
    }

    pub fn monomial(&self, exponent: MultiIndex, c: u64) -> Polynomial {
        assert_eq!(exponent.len(), self.nvars, "exponent dimension");
        let c = self.field.reduce(c);
        let terms = if c == 0 { vec![] } else { vec![(exponent, c)] };
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(&self, i: usize) -> Polynomial {
        self.monomial(MultiIndex::unit(self.nvars, i), 1)
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(&self, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (MultiIndex, u32)>,
    {
        let mut acc: HashMap<MultiIndex, u32> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), self.nvars, "exponent dimension");
            let slot = acc.entry(e).or_insert(0);
            *slot = self.field.add(*slot, self.field.reduce(c as u64));
        }
        self.collect(acc)
    }

    fn collect(&self, acc: HashMap<MultiIndex, u32>) -> Polynomial {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let order = self.order;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse::parse(self, text)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(MultiIndex, u32)>,
}

impl Polynomial {
    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in descending order under the ring's monomial order.
    #[inline]
    pub fn terms(&self) -> &[(MultiIndex, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(MultiIndex, u32)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1 == 1
    }

    /// The constant coefficient as a field element.
    pub fn constant_term(&self) -> FpScalar {
        let c = self
            .terms
            .last()
            .filter(|(e, _)| e.is_zero())
            .map_or(0, |(_, c)| *c);
        self.ring.field.element(c as u64)
    }

    pub fn coefficient(&self, exponent: &[u32]) -> u32 {
        let order = self.ring.order;
        self.terms
            .binary_search_by(|(e, _)| order.cmp(exponent, e))
            .map_or(0, |i| self.terms[i].1)
    }

    pub fn leading_term(&self) -> Option<(&MultiIndex, u32)> {
        self.terms.first().map(|(e, c)| (e, *c))
    }

    /// Total degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(e, _)| e.total() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Re-sorts the terms under another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.ring.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring.reordered(order),
            terms,
        }
    }

    fn aligned<'a>(&self, other: &'a Polynomial) -> Result<std::borrow::Cow<'a, [(MultiIndex, u32)]>> {
        self.ring.check_compatible(&other.ring)?;
        Ok(if other.ring.order == self.ring.order {
            std::borrow::Cow::Borrowed(other.terms.as_slice())
        } else {
            std::borrow::Cow::Owned(other.with_order(self.ring.order).terms)
        })
    }

    fn merge(&self, other: &[(MultiIndex, u32)], negate: bool) -> Polynomial {
        let f = &self.ring.field;
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other[j];
            let cb = if negate { f.neg(*cb) } else { *cb };
            match order.cmp(ea, eb) {
                std::cmp::Ordering::Greater => {
                    out.push((ea.clone(), *ca));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((eb.clone(), cb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(*ca, cb);
                    if c != 0 {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other[j..].iter().map(|(e, c)| {
            let c = if negate { f.neg(*c) } else { *c };
            (e.clone(), c)
        }));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        let rhs = self.aligned(other)?;
        Ok(self.merge(&rhs, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        let rhs = self.aligned(other)?;
        Ok(self.merge(&rhs, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_compatible(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        let f = &self.ring.field;
        let mut acc: HashMap<MultiIndex, u32> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(ea.add(eb)).or_insert(0);
                *slot = f.add(*slot, f.mul(*ca, *cb));
            }
        }
        Ok(self.ring.collect(acc))
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = &self.ring.field;
        let c = c % f.p();
        if c == 0 {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), f.mul(*a, c))).collect(),
        }
    }

    /// Multiplies by `c·x^m`; term order is preserved by monomial multiplication.
    pub fn mul_term(&self, m: &MultiIndex, c: u32) -> Polynomial {
        let f = &self.ring.field;
        let c = c % f.p();
        if c == 0 {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.add(m), f.mul(*a, c)))
                .collect(),
        }
    }

    /// Makes the leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.ring.field.inv(*lc).expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    /// `self^m` by binary exponentiation; `self^0 = 1`.
    pub fn pow(&self, m: u64) -> Polynomial {
        self.pow_capped(m, usize::MAX)
            .expect("uncapped power cannot hit the term limit")
    }

    /// `self^m`, failing with `ResourceLimit` once an intermediate exceeds `term_cap` terms.
    pub fn pow_capped(&self, mut m: u64, term_cap: usize) -> Result<Polynomial> {
        let mut acc = self.ring.one();
        if m == 0 {
            return Ok(acc);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            let exp = e
                .iter()
                .map(|&x| u32::try_from(x as u64 * m).ok())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::ResourceLimit("exponent overflow in power".into()))?;
            return Ok(self
                .ring
                .monomial(MultiIndex::new(exp), self.ring.field.pow(*c, m) as u64));
        }
        let mut base = self.clone();
        let check = |p: &Polynomial| -> Result<()> {
            if p.len() > term_cap {
                Err(Error::ResourceLimit(format!(
                    "intermediate power has {} terms (cap {term_cap})",
                    p.len()
                )))
            } else {
                Ok(())
            }
        };
        loop {
            if m & 1 == 1 {
                acc = &acc * &base;
                check(&acc)?;
            }
            m >>= 1;
            if m == 0 {
                break;
            }
            base = &base * &base;
            check(&base)?;
        }
        Ok(acc)
    }

    /// `self^(p^n)`: exponents scaled by `p^n`, coefficients fixed by Frobenius on F_p.
    pub fn frobenius(&self, n: u32) -> Result<Polynomial> {
        if n == 0 {
            return Ok(self.clone());
        }
        let q = self.ring.prime_power(n)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                e.checked_scale(q)
                    .map(|e| (e, *c))
                    .ok_or_else(|| Error::ResourceLimit(format!("exponent {e:?} times {q} overflows")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// The unique `g` with `g^(p^n) = self`; requires every exponent divisible by `p^n`.
    pub fn pn_root(&self, n: u32) -> Result<Polynomial> {
        if n == 0 {
            return Ok(self.clone());
        }
        let q = self.ring.prime_power(n)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if let Some(&bad) = e.iter().find(|&&x| !(x as u64).is_multiple_of(q)) {
                return Err(Error::NotAPnPower {
                    n,
                    q,
                    exponent: bad as u64,
                });
            }
            terms.push((MultiIndex::new(e.iter().map(|&x| (x as u64 / q) as u32).collect()), *c));
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn format(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.ring.p())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// Panics when the operands live in different rings; see the `checked_` variant.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial ring mismatch")
            }
        }

        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn ring(p: u64, d: usize) -> Ring {
        Ring::new(p, d).unwrap()
    }

    #[test]
    fn parse_examples() {
        let r = ring(3, 4);
        let q = r.parse("x1^2+x2^2+x3^2+x4^2").unwrap();
        assert_eq!(q.len(), 4);
        assert!(r.parse("3*x1").unwrap().is_zero());
        let r5 = ring(5, 1);
        assert_eq!(r5.parse("x1*x1").unwrap(), r5.monomial(MultiIndex::new(vec![2]), 1));
    }

    #[test]
    fn pow_examples() {
        let r = ring(3, 4);
        let q = r.parse("x1^2+x2^2+x3^2+x4^2").unwrap();
        assert_eq!(q.pow(2).coefficient(&[2, 2, 0, 0]), 2);
        let r2 = ring(2, 2);
        assert_eq!(r2.parse("x1+x2").unwrap().pow(2), r2.parse("x1^2+x2^2").unwrap());
        let r5 = ring(5, 4);
        let q5 = r5.parse("x1^2+x2^2+x3^2+x4^2").unwrap();
        // 4!/(1!)^4 = 24
        assert_eq!(q5.pow(4).coefficient(&[2, 2, 2, 2]), 24 % 5);
        assert!(q5.pow(0).is_one());
    }

    #[test]
    fn frobenius_and_root_examples() {
        let r = ring(3, 2);
        let f = r.parse("x1+x2").unwrap();
        assert_eq!(f.frobenius(1).unwrap(), r.parse("x1^3+x2^3").unwrap());
        let g = r.parse("2*x1").unwrap();
        assert_eq!(g.frobenius(1).unwrap(), r.parse("2*x1^3").unwrap());
        assert_eq!(f.frobenius(0).unwrap(), f);

        let h = r.parse("x1^3+2*x2^3").unwrap();
        assert_eq!(h.pn_root(1).unwrap(), r.parse("x1+2*x2").unwrap());
        assert_eq!(h.pn_root(0).unwrap(), h);
        let r2 = ring(2, 1);
        assert_eq!(r2.parse("x1^4").unwrap().pn_root(2).unwrap(), r2.var(0));
        assert!(matches!(
            r.parse("x1^3+x2").unwrap().pn_root(1),
            Err(Error::NotAPnPower { .. })
        ));
    }

    #[test]
    fn degree_examples() {
        let r = ring(3, 4);
        assert_eq!(r.parse("x1^2+x2^2+x3^2+x4^2").unwrap().degree(), 2);
        assert_eq!(r.zero().degree(), -1);
        assert_eq!(r.parse("x1^2*x2 + x3").unwrap().degree(), 3);
    }

    #[test]
    fn frobenius_overflow_is_a_resource_limit() {
        let r = ring(5, 1);
        let f = r.parse("x1^1000").unwrap();
        assert!(matches!(f.frobenius(12), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn context_mismatch() {
        let a = ring(3, 2).var(0);
        let b = ring(5, 2).var(0);
        let c = ring(3, 3).var(0);
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch(_))));
        assert!(matches!(a.checked_mul(&c), Err(Error::ContextMismatch(_))));
        let lex = Ring::with_order(3, 2, MonomialOrder::Lex).unwrap().var(1);
        assert_eq!((a.checked_add(&lex).unwrap()).ring().order(), MonomialOrder::Grevlex);
    }

    #[test]
    fn pow_cap() {
        let r = ring(5, 3);
        let f = r.parse("x1+x2+x3+1").unwrap();
        assert!(matches!(f.pow_capped(20, 50), Err(Error::ResourceLimit(_))));
        assert!(f.pow_capped(2, 50).is_ok());
    }

    pub fn poly_strategy(p: u64, d: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
        let r = ring(p, d);
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, d), 0..p as u32),
            0..=max_terms,
        )
        .prop_map(move |terms| {
            let terms: Vec<_> = terms
                .into_iter()
                .map(|(mut e, c)| {
                    // keep the total degree within max_deg
                    while e.iter().sum::<u32>() > max_deg {
                        let i = e.iter().position(|&x| x > 0).unwrap();
                        e[i] -= 1;
                    }
                    (MultiIndex::new(e), c)
                })
                .collect();
            r.from_terms(terms)
        })
    }

    fn setting() -> impl Strategy<Value = (u64, usize)> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn ring_axioms((f, g, h) in setting().prop_flat_map(|(p, d)| (
            poly_strategy(p, d, 6, 5), poly_strategy(p, d, 6, 5), poly_strategy(p, d, 6, 5)
        ))) {
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert!((&f - &f).is_zero());
            prop_assert_eq!(&(&f - &g) + &g, f.clone());
            if !f.is_zero() && !g.is_zero() {
                prop_assert_eq!((&f * &g).degree(), f.degree() + g.degree());
            }
        }

        #[test]
        fn frobenius_is_power((p, f, n) in setting().prop_flat_map(|(p, d)| (Just(p), poly_strategy(p, d, 3, 3), 0u32..=2))) {
            let q = p.pow(n);
            prop_assert_eq!(f.frobenius(n).unwrap(), f.pow(q));
            prop_assert_eq!(f.frobenius(n).unwrap().pn_root(n).unwrap(), f);
        }

        #[test]
        fn parse_format_round_trip(f in setting().prop_flat_map(|(p, d)| poly_strategy(p, d, 6, 6))) {
            let text = f.format();
            prop_assert_eq!(f.ring().parse(&text).unwrap(), f);
        }
    }
}
