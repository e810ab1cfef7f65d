//! Operators `Q` with `Q(1/f) = 1/f^p`, their iterates, and certificates.
//!
//! The descent operator is assembled from the stabilized chain: with
//! `F = f^{p^s−1}` and `G = f^{p^s−p}`, the stable ideal forces `G ∈ J_s(F)`,
//! so `G = Σ h_α·F_α(x^{p^s})`, and each piece `F_α(x^{p^s})` equals `Q_α(F)`
//! for a witness operator of level `s`. Then `Q = Σ h_α·Q_α` maps `F` to `G`,
//! and because `Q` commutes with `f^{p^s}` it maps `F/f^{p^s} = 1/f` to
//! `G/f^{p^s} = 1/f^p`.

use std::fmt;

use crate::diffop::{witness_from_decomposition, DiffOp};
use crate::error::{Error, Result};
use crate::frobdecomp::decompose;
use crate::gfp::FpScalar;
use crate::groebner::combine;
use crate::ideal_chain::{stabilization, Limits};
use crate::poly::{MultiIndex, Polynomial, Ring};

/// Anything that acts F_p-linearly on polynomials with a known level.
pub trait Operator {
    fn ring(&self) -> &Ring;
    fn apply(&self, g: &Polynomial) -> Result<Polynomial>;
    fn level(&self) -> u32;
}

impl Operator for DiffOp {
    fn ring(&self) -> &Ring {
        DiffOp::ring(self)
    }

    fn apply(&self, g: &Polynomial) -> Result<Polynomial> {
        DiffOp::apply(self, g)
    }

    fn level(&self) -> u32 {
        DiffOp::level(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub alpha: MultiIndex,
    pub h: Polynomial,
    pub q: DiffOp,
}

/// `Σ (h_α·) ∘ Q_α`, kept unexpanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredOperator {
    ring: Ring,
    summands: Vec<Summand>,
}

impl FactoredOperator {
    pub fn new(ring: &Ring, summands: Vec<Summand>) -> Result<Self> {
        for s in &summands {
            ring.check_compatible(s.h.ring())?;
            ring.check_compatible(s.q.ring())?;
        }
        Ok(FactoredOperator {
            ring: ring.clone(),
            summands,
        })
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn expand(&self) -> Result<DiffOp> {
        let mut acc = DiffOp::zero(&self.ring);
        for s in &self.summands {
            acc = acc.checked_add(&s.q.left_mul(&s.h)?)?;
        }
        Ok(acc)
    }
}

impl Operator for FactoredOperator {
    fn ring(&self) -> &Ring {
        &self.ring
    }

    fn apply(&self, g: &Polynomial) -> Result<Polynomial> {
        let mut acc = self.ring.zero();
        for s in &self.summands {
            let part = s.q.apply(g)?;
            acc = acc.checked_add(&s.h.checked_mul(&part)?)?;
        }
        Ok(acc)
    }

    fn level(&self) -> u32 {
        self.summands.iter().map(|s| s.q.level()).max().unwrap_or(0)
    }
}

/// The operator carried by a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertOperator {
    Factored(FactoredOperator),
    Expanded(DiffOp),
}

impl CertOperator {
    pub fn expand(&self) -> Result<DiffOp> {
        match self {
            CertOperator::Factored(op) => op.expand(),
            CertOperator::Expanded(op) => Ok(op.clone()),
        }
    }
}

impl Operator for CertOperator {
    fn ring(&self) -> &Ring {
        match self {
            CertOperator::Factored(op) => op.ring(),
            CertOperator::Expanded(op) => Operator::ring(op),
        }
    }

    fn apply(&self, g: &Polynomial) -> Result<Polynomial> {
        match self {
            CertOperator::Factored(op) => op.apply(g),
            CertOperator::Expanded(op) => Operator::apply(op, g),
        }
    }

    fn level(&self) -> u32 {
        match self {
            CertOperator::Factored(op) => op.level(),
            CertOperator::Expanded(op) => Operator::level(op),
        }
    }
}

/// `g / f^{p^t}` in `R[1/f]`.
#[derive(Clone, Debug)]
pub struct LocalizationElement {
    f: Polynomial,
    numerator: Polynomial,
    level: u32,
}

impl LocalizationElement {
    pub fn new(f: &Polynomial, numerator: &Polynomial, level: u32) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroInput("cannot localize at the zero polynomial"));
        }
        f.ring().check_compatible(numerator.ring())?;
        Ok(LocalizationElement {
            f: f.clone(),
            numerator: numerator.with_order(f.ring().order()),
            level,
        })
    }

    /// `1/f^k`, written over the smallest `f^{p^t}` with `p^t ≥ k`.
    pub fn reciprocal_power(f: &Polynomial, k: u64, limits: &Limits) -> Result<Self> {
        let t = smallest_level(f.ring().p(), k);
        limits.check_exponent(f, t)?;
        let q = f.ring().prime_power(t)?;
        let num = f.pow_capped(q - k, limits.term_cap)?;
        LocalizationElement::new(f, &num, t)
    }

    pub fn ambient(&self) -> &Polynomial {
        &self.f
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The same element over `f^{p^t}` for some `t ≥ self.level`.
    pub fn lift(&self, t: u32, limits: &Limits) -> Result<Self> {
        if t < self.level {
            return Err(Error::InvalidInput(format!(
                "cannot lower level {} to {t}",
                self.level
            )));
        }
        let hi = limits.check_exponent(&self.f, t)?;
        let lo = self.f.ring().prime_power(self.level)?;
        let factor = self.f.pow_capped(hi - lo, limits.term_cap)?;
        LocalizationElement::new(&self.f, &self.numerator.checked_mul(&factor)?, t)
    }

    /// Cross-multiplication: `g_u·f^{p^{t_v}} = g_v·f^{p^{t_u}}`.
    pub fn equals(&self, other: &LocalizationElement) -> Result<bool> {
        self.f.ring().check_compatible(other.f.ring())?;
        if self.f != other.f {
            return Err(Error::mismatch("localization elements over different polynomials"));
        }
        let lhs = self.numerator.checked_mul(&self.f.frobenius(other.level)?)?;
        let rhs = other.numerator.checked_mul(&self.f.frobenius(self.level)?)?;
        Ok(lhs == rhs)
    }

    pub fn is_reciprocal_power(&self, k: u64, limits: &Limits) -> Result<bool> {
        self.equals(&LocalizationElement::reciprocal_power(&self.f, k, limits)?)
    }
}

impl fmt::Display for LocalizationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})^{}", self.numerator, self.f, u64::from(self.f.ring().p()).pow(self.level))
    }
}

fn smallest_level(p: u32, k: u64) -> u32 {
    let mut t = 0;
    let mut q = 1u64;
    while q < k {
        q = q.saturating_mul(p as u64);
        t += 1;
    }
    t
}

/// `Q(u)`: lifts `u` to a level `t ≥ level(Q)`, where `Q` commutes with
/// `f^{p^t}`, and applies `Q` to the numerator.
pub fn apply_to_localization<O: Operator + ?Sized>(
    q: &O,
    u: &LocalizationElement,
    limits: &Limits,
) -> Result<LocalizationElement> {
    q.ring().check_compatible(u.f.ring())?;
    let t = u.level.max(q.level());
    let lifted = u.lift(t, limits)?;
    LocalizationElement::new(&u.f, &q.apply(&lifted.numerator)?, t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

impl Check {
    fn new(name: &str, ok: bool) -> Self {
        Check {
            name: name.to_string(),
            ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenerationCertificate {
    pub f: Polynomial,
    pub s: u32,
    pub stable_ideal: Vec<Polynomial>,
    /// `f^{p^s−p} = Σ h_α·F_α(x^{p^s})` where `F = f^{p^s−1}`.
    pub cofactors: Vec<(MultiIndex, Polynomial)>,
    pub operator: CertOperator,
    pub verified: bool,
    pub transcript: Vec<Check>,
}

impl GenerationCertificate {
    pub fn p(&self) -> u32 {
        self.f.ring().p()
    }

    /// Replaces the factored operator by its normal form and re-runs the checks.
    pub fn expanded(&self, limits: &Limits) -> Result<GenerationCertificate> {
        let mut cert = self.clone();
        cert.operator = CertOperator::Expanded(self.operator.expand()?);
        cert.transcript = verify_certificate(&cert, limits)?;
        cert.verified = cert.transcript.iter().all(|c| c.ok);
        if !cert.verified {
            return Err(Error::internal("expanded operator fails verification"));
        }
        Ok(cert)
    }
}

/// Re-checks a certificate from its data alone, ignoring stored outcomes.
///
/// Resource errors while forming `f^{p^s−1}` propagate; every mathematical
/// check is reported in the transcript.
pub fn verify_certificate(cert: &GenerationCertificate, limits: &Limits) -> Result<Vec<Check>> {
    let f = &cert.f;
    let ring = f.ring();
    if f.is_zero() {
        return Err(Error::ZeroInput("certificate for the zero polynomial"));
    }
    if cert.s == 0 {
        return Err(Error::InvalidInput("certificate level must be at least 1".into()));
    }
    ring.check_compatible(Operator::ring(&cert.operator))?;
    let q = limits.check_exponent(f, cert.s)?;
    let p = ring.p() as u64;
    let big_f = f.pow_capped(q - 1, limits.term_cap)?;
    let big_g = f.pow_capped(q - p, limits.term_cap)?;
    let mut out = Vec::new();

    out.push(Check::new("level_bound", cert.operator.level() <= cert.s));

    let dec = decompose(&big_f, cert.s)?;
    let pieces = dec.pieces()?;
    let mut sum = ring.zero();
    let mut keys_ok = true;
    for (alpha, h) in &cert.cofactors {
        match pieces.iter().find(|(a, _)| a == alpha) {
            Some((_, piece)) => sum = sum.checked_add(&h.checked_mul(piece)?)?,
            None => keys_ok = false,
        }
    }
    out.push(Check::new("cofactor_identity", keys_ok && sum == big_g));

    if let CertOperator::Factored(op) = &cert.operator {
        let matches = op.summands.len() == cert.cofactors.len()
            && op
                .summands
                .iter()
                .zip(&cert.cofactors)
                .all(|(s, (a, h))| &s.alpha == a && &s.h == h);
        out.push(Check::new("operator_matches_cofactors", matches));
        let mut witnesses_ok = true;
        for s in &op.summands {
            let piece = pieces.iter().find(|(a, _)| a == &s.alpha).map(|(_, g)| g);
            if piece != Some(&s.q.apply(&big_f)?) {
                witnesses_ok = false;
            }
        }
        out.push(Check::new("witness_pieces", witnesses_ok));
    }

    out.push(Check::new("Q_on_f_power", cert.operator.apply(&big_f)? == big_g));

    let u = LocalizationElement::new(f, &big_f, cert.s)?;
    let image = apply_to_localization(&cert.operator, &u, limits)?;
    out.push(Check::new(
        "Q_on_reciprocal",
        image.is_reciprocal_power(p, limits)?,
    ));
    Ok(out)
}

/// Builds and verifies `Q` with `Q(f^{p^s−1}) = f^{p^s−p}`, hence `Q(1/f) = 1/f^p`.
pub fn frobenius_descent(f: &Polynomial, limits: &Limits) -> Result<GenerationCertificate> {
    if f.is_zero() {
        return Err(Error::ZeroInput("1/0 is undefined"));
    }
    let ring = f.ring();
    let cert = if f.is_constant() {
        let zero = MultiIndex::zero(ring.nvars());
        let summand = Summand {
            alpha: zero.clone(),
            h: ring.one(),
            q: DiffOp::identity(ring),
        };
        GenerationCertificate {
            f: f.clone(),
            s: 1,
            stable_ideal: vec![ring.one()],
            cofactors: vec![(zero, ring.one())],
            operator: CertOperator::Factored(FactoredOperator::new(ring, vec![summand])?),
            verified: false,
            transcript: Vec::new(),
        }
    } else {
        assemble(f, limits)?
    };
    finish(cert, limits)
}

fn finish(mut cert: GenerationCertificate, limits: &Limits) -> Result<GenerationCertificate> {
    cert.transcript = verify_certificate(&cert, limits)?;
    cert.verified = cert.transcript.iter().all(|c| c.ok);
    if !cert.verified {
        let failed: Vec<&str> = cert
            .transcript
            .iter()
            .filter(|c| !c.ok)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::internal(format!(
            "certificate for {} failed: {}",
            cert.f,
            failed.join(", ")
        )));
    }
    Ok(cert)
}

fn assemble(f: &Polynomial, limits: &Limits) -> Result<GenerationCertificate> {
    let ring = f.ring();
    let chain = stabilization(f, limits)?;
    let s = chain.s;
    let q = limits.check_exponent(f, s)?;
    let p = ring.p() as u64;
    let big_f = f.pow_capped(q - 1, limits.term_cap)?;
    let big_g = f.pow_capped(q - p, limits.term_cap)?;
    let dec_f = decompose(&big_f, s)?;
    // The chain's last level is a Gröbner basis of I_s(F) over the roots in
    // decomposition order.
    let basis = &chain
        .levels
        .last()
        .ok_or_else(|| Error::internal("empty chain"))?
        .basis;
    let roots: Vec<&Polynomial> = dec_f.parts().iter().map(|(_, r)| r).collect();
    if basis.generators().len() != roots.len()
        || basis.generators().iter().zip(&roots).any(|(a, b)| a != *b)
    {
        return Err(Error::internal("chain basis does not match the decomposition of F"));
    }

    // G ∈ I^{[q]} iff every root of G's decomposition lies in I; the root
    // cofactors lift to h_α = Σ_β c_{βα}^{[q]}·x^β.
    let mut h: Vec<Polynomial> = vec![ring.zero(); roots.len()];
    for (beta, g_root) in decompose(&big_g, s)?.parts() {
        let cof = basis.cofactors(g_root)?.ok_or_else(|| {
            Error::internal(format!("f^(p^s-p) is not in J_s(f^(p^s-1)) for f = {f}"))
        })?;
        for (slot, c) in h.iter_mut().zip(cof) {
            if !c.is_zero() {
                let lifted = c.frobenius(s)?.mul_term(beta, 1);
                *slot = slot.checked_add(&lifted)?;
            }
        }
    }
    let pieces: Vec<Polynomial> = dec_f
        .parts()
        .iter()
        .map(|(_, r)| r.frobenius(s))
        .collect::<Result<_>>()?;
    if combine(ring, &h, &pieces) != big_g {
        return Err(Error::internal("lifted cofactors do not reproduce f^(p^s-p)"));
    }

    let mut summands = Vec::new();
    let mut cofactors = Vec::new();
    for ((alpha, _), h_alpha) in dec_f.parts().iter().zip(h) {
        if h_alpha.is_zero() {
            continue;
        }
        let q_alpha = witness_from_decomposition(&big_f, &dec_f, alpha)?;
        cofactors.push((alpha.clone(), h_alpha.clone()));
        summands.push(Summand {
            alpha: alpha.clone(),
            h: h_alpha,
            q: q_alpha,
        });
    }
    Ok(GenerationCertificate {
        f: f.clone(),
        s,
        stable_ideal: chain.stable_ideal.generators().to_vec(),
        cofactors,
        operator: CertOperator::Factored(FactoredOperator::new(ring, summands)?),
        verified: false,
        transcript: Vec::new(),
    })
}

/// `P_e` with `P_e(1/f) = 1/f^{p^e}`: the composite of the descent operators
/// of `f, f^p, …, f^{p^{e−1}}`.
pub fn power_witness(f: &Polynomial, e: u32, limits: &Limits) -> Result<DiffOp> {
    if e == 0 {
        return Err(Error::InvalidInput("power exponent must be at least 1".into()));
    }
    let mut acc = DiffOp::identity(f.ring());
    for j in 0..e {
        let step = frobenius_descent(&f.frobenius(j)?, limits)?;
        acc = step.operator.expand()?.compose(&acc)?;
    }
    let k = f.ring().prime_power(e)?;
    check_reciprocal(&acc, f, k, limits)?;
    Ok(acc)
}

/// An operator sending `1/f` to `1/f^k`: `f^{p^e−k}·P_e` for the least `e` with `p^e ≥ k`.
pub fn generator_witness(f: &Polynomial, k: u64, limits: &Limits) -> Result<DiffOp> {
    if f.is_zero() {
        return Err(Error::ZeroInput("1/0 is undefined"));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let e = smallest_level(f.ring().p(), k);
    let op = if e == 0 {
        DiffOp::identity(f.ring())
    } else {
        let q = f.ring().prime_power(e)?;
        let pe = power_witness(f, e, limits)?;
        if q == k {
            pe
        } else {
            pe.left_mul(&f.pow_capped(q - k, limits.term_cap)?)?
        }
    };
    check_reciprocal(&op, f, k, limits)?;
    Ok(op)
}

fn check_reciprocal(op: &DiffOp, f: &Polynomial, k: u64, limits: &Limits) -> Result<()> {
    let one_over_f = LocalizationElement::reciprocal_power(f, 1, limits)?;
    let image = apply_to_localization(op, &one_over_f, limits)?;
    if !image.is_reciprocal_power(k, limits)? {
        return Err(Error::internal(format!(
            "operator does not send 1/f to 1/f^{k} for f = {f}"
        )));
    }
    Ok(())
}

/// The closed-form operator for `x1^2 + x2^2 + x3^2 + x4^2`: a monomial
/// `a·x^α` of `f^{p−1}` with every `α_i < p`, and `Q = a^{−1}·D_α`.
#[derive(Clone, Debug)]
pub struct QuadricExample {
    pub alpha: MultiIndex,
    pub a: FpScalar,
    pub q: DiffOp,
}

pub fn example_quadric_witness(p: u64) -> Result<QuadricExample> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    let ring = Ring::new(p, 4)?;
    let field = ring.field();
    let p32 = ring.p();
    let alpha = if (p32 - 1) % 4 == 0 {
        MultiIndex::splat(4, (p32 - 1) / 2)
    } else {
        let hi = p32.div_ceil(2);
        let lo = (p32 - 3) / 2;
        MultiIndex::new(vec![hi, hi, lo, lo])
    };
    // Coefficient of x^α in (Σ x_i^2)^{p−1}: the multinomial (p−1; α/2),
    // as a product of binomials.
    let mut left = p - 1;
    let mut a = 1;
    for &ai in alpha.iter() {
        let k = ai as u64 / 2;
        a = field.mul(a, field.binom(left, k));
        left -= k;
    }
    let a = field.element(a as u64);
    let inv = a.inv().map_err(|_| Error::internal(format!("a_alpha vanishes mod {p}")))?;
    let q = DiffOp::derivation(&ring, alpha.clone()).scale(inv.value());

    let f = ring.parse("x1^2 + x2^2 + x3^2 + x4^2")?;
    let f_pow = f.pow(p - 1);
    if f_pow.coefficient(&alpha) != a.value() {
        return Err(Error::internal("a_alpha disagrees with the expansion of f^(p-1)"));
    }
    if !q.apply(&f_pow)?.is_one() {
        return Err(Error::internal("Q(f^(p-1)) != 1"));
    }
    let limits = Limits::default();
    let one_over_f = LocalizationElement::reciprocal_power(&f, 1, &limits)?;
    if !apply_to_localization(&q, &one_over_f, &limits)?.is_reciprocal_power(p, &limits)? {
        return Err(Error::internal("Q(1/f) != 1/f^p"));
    }
    Ok(QuadricExample { alpha, a, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::ring;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn descent_for_x() {
        let lim = Limits::default();
        let r = ring(3, 1);
        let cert = frobenius_descent(&r.var(0), &lim).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.s, 2);
        let op = cert.operator.expand().unwrap();
        assert_eq!(op, DiffOp::term(&r, mi(&[6]), mi(&[8]), 1));
        assert_eq!(op.apply(&r.parse("x1^8").unwrap()).unwrap(), r.parse("x1^6").unwrap());
        let u = LocalizationElement::new(&r.var(0), &r.parse("x1^8").unwrap(), 2).unwrap();
        let image = apply_to_localization(&op, &u, &lim).unwrap();
        assert!(image.is_reciprocal_power(3, &lim).unwrap());
    }

    #[test]
    fn descent_for_constants() {
        let lim = Limits::default();
        let r = ring(5, 2);
        let cert = frobenius_descent(&r.constant(3), &lim).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.operator.expand().unwrap(), DiffOp::identity(&r));
        assert!(matches!(frobenius_descent(&r.zero(), &lim), Err(Error::ZeroInput(_))));
    }

    #[test]
    fn descent_for_quadric_mod_2() {
        let lim = Limits::default();
        let r = ring(2, 4);
        let f = r.parse("x1^2+x2^2+x3^2+x4^2").unwrap();
        let cert = frobenius_descent(&f, &lim).unwrap();
        assert_eq!(cert.s, 2);
        let q = cert.operator.expand().unwrap();
        assert_eq!(q.apply(&f.pow(3)).unwrap(), f.pow(2));
        assert!(q.level() <= 2);
    }

    #[test]
    fn localization_examples() {
        let lim = Limits::default();
        for p in [2u64, 3, 5, 7] {
            let r = ring(p, 1);
            let x = r.var(0);
            let d = DiffOp::derivation(&r, mi(&[p as u32 - 1]));
            let u = LocalizationElement::reciprocal_power(&x, 1, &lim).unwrap();
            assert_eq!(u.level(), 0);
            let image = apply_to_localization(&d, &u, &lim).unwrap();
            assert!(image.is_reciprocal_power(p, &lim).unwrap());
            let id = apply_to_localization(&DiffOp::identity(&r), &u, &lim).unwrap();
            assert!(id.equals(&u).unwrap());
        }
    }

    #[test]
    fn lifting_preserves_value() {
        let lim = Limits::default();
        let r = ring(3, 2);
        let f = r.parse("x1^2 + x2^3").unwrap();
        let u = LocalizationElement::new(&f, &r.parse("x1 + 2").unwrap(), 0).unwrap();
        for t in 0..3 {
            let v = u.lift(t, &lim).unwrap();
            assert!(v.equals(&u).unwrap());
            assert_eq!(v.level(), t);
        }
        assert!(u.lift(2, &lim).unwrap().lift(1, &lim).is_err());
        let w = LocalizationElement::new(&f, &r.parse("x1").unwrap(), 0).unwrap();
        assert!(!w.equals(&u).unwrap());
    }

    #[test]
    fn power_and_generator_witnesses() {
        let lim = Limits::default();
        let r = ring(2, 1);
        let x = r.var(0);
        let p2 = power_witness(&x, 2, &lim).unwrap();
        let u = LocalizationElement::reciprocal_power(&x, 1, &lim).unwrap();
        assert!(apply_to_localization(&p2, &u, &lim).unwrap().is_reciprocal_power(4, &lim).unwrap());

        let one = power_witness(&x, 1, &lim).unwrap();
        let cert = frobenius_descent(&x, &lim).unwrap();
        assert_eq!(one, cert.operator.expand().unwrap());

        assert_eq!(generator_witness(&x, 1, &lim).unwrap(), DiffOp::identity(&r));
        assert_eq!(generator_witness(&x, 2, &lim).unwrap(), one);

        let r3 = ring(3, 1);
        let x = r3.var(0);
        let g = generator_witness(&x, 2, &lim).unwrap();
        let u = LocalizationElement::reciprocal_power(&x, 1, &lim).unwrap();
        assert!(apply_to_localization(&g, &u, &lim).unwrap().is_reciprocal_power(2, &lim).unwrap());
    }

    #[test]
    fn quadric_example() {
        let ex = example_quadric_witness(3).unwrap();
        assert_eq!(ex.alpha, mi(&[2, 2, 0, 0]));
        assert_eq!(ex.a.value(), 2);
        assert_eq!(ex.q, DiffOp::derivation(ex.q.ring(), mi(&[2, 2, 0, 0])).scale(2));
        let ex = example_quadric_witness(5).unwrap();
        assert_eq!((ex.alpha, ex.a.value()), (mi(&[2, 2, 2, 2]), 4));
        let ex = example_quadric_witness(7).unwrap();
        assert_eq!((ex.alpha, ex.a.value()), (mi(&[4, 4, 2, 2]), 5));
        let ex = example_quadric_witness(13).unwrap();
        assert_eq!((ex.alpha, ex.a.value()), (mi(&[6, 6, 6, 6]), 10));
        assert!(matches!(example_quadric_witness(2), Err(Error::UnsupportedPrime(2))));
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let lim = Limits::default();
        let r = ring(3, 2);
        let f = r.parse("x1^2 + x2^3").unwrap();
        let mut cert = frobenius_descent(&f, &lim).unwrap();
        assert!(verify_certificate(&cert, &lim).unwrap().iter().all(|c| c.ok));
        cert.cofactors[0].1 = &cert.cofactors[0].1 + &r.one();
        let checks = verify_certificate(&cert, &lim).unwrap();
        assert!(checks.iter().any(|c| !c.ok));
    }
}
