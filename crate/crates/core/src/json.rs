//! Serialized forms of the library's values.
//!
//! Polynomials travel as text in the ring's grammar. Every list is emitted in
//! a canonical order and every struct has a fixed field order, so identical
//! values always serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::frobdecomp::PnDecomposition;
use crate::generation::{
    CertOperator, Check, FactoredOperator, GenerationCertificate, LocalizationElement,
    QuadricExample, Summand,
};
use crate::ideal_chain::ChainResult;
use crate::poly::{MonomialOrder, MultiIndex, Polynomial, Ring};

pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

fn texts(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|g| g.to_string()).collect()
}

fn parse_all(ring: &Ring, texts: &[String]) -> Result<Vec<Polynomial>> {
    texts.iter().map(|t| ring.parse(t)).collect()
}

fn index(ring: &Ring, v: &[u32], what: &str) -> Result<MultiIndex> {
    if v.len() != ring.nvars() {
        return Err(Error::InvalidInput(format!(
            "{what} has {} entries, expected {}",
            v.len(),
            ring.nvars()
        )));
    }
    Ok(MultiIndex::new(v.to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpTermJson {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
    pub c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub p: u32,
    pub d: usize,
    pub terms: Vec<OpTermJson>,
}

impl OperatorJson {
    pub fn from_op(op: &DiffOp) -> Self {
        OperatorJson {
            p: op.ring().p(),
            d: op.ring().nvars(),
            terms: op
                .terms()
                .map(|(a, b, c)| OpTermJson {
                    x: a.to_vec(),
                    d: b.to_vec(),
                    c,
                })
                .collect(),
        }
    }

    pub fn ring(&self, order: MonomialOrder) -> Result<Ring> {
        Ring::with_order(self.p as u64, self.d, order)
    }

    pub fn to_op(&self, ring: &Ring) -> Result<DiffOp> {
        if ring.p() != self.p || ring.nvars() != self.d {
            return Err(Error::mismatch(format!(
                "operator over F_{} in {} variables, expected F_{} in {}",
                self.p,
                self.d,
                ring.p(),
                ring.nvars()
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.c == 0 || t.c >= self.p {
                return Err(Error::InvalidInput(format!(
                    "operator coefficient {} outside [1, {})",
                    t.c, self.p
                )));
            }
            terms.push((index(ring, &t.x, "x")?, index(ring, &t.d, "d")?, t.c));
        }
        let op = DiffOp::from_terms(ring, terms);
        if op.len() != self.terms.len() {
            return Err(Error::InvalidInput("operator lists a term twice".into()));
        }
        Ok(op)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartJson {
    pub alpha: Vec<u32>,
    pub root: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionJson {
    pub p: u32,
    pub d: usize,
    pub n: u32,
    pub parts: Vec<PartJson>,
}

impl DecompositionJson {
    pub fn from_decomposition(dec: &PnDecomposition) -> Self {
        DecompositionJson {
            p: dec.ring().p(),
            d: dec.ring().nvars(),
            n: dec.level(),
            parts: dec
                .parts()
                .iter()
                .map(|(a, r)| PartJson {
                    alpha: a.to_vec(),
                    root: r.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_decomposition(&self, ring: &Ring) -> Result<PnDecomposition> {
        let parts = self
            .parts
            .iter()
            .map(|part| Ok((index(ring, &part.alpha, "alpha")?, ring.parse(&part.root)?)))
            .collect::<Result<Vec<_>>>()?;
        PnDecomposition::from_parts(ring, self.n, parts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainLevelJson {
    pub n: u32,
    pub generators: Vec<String>,
    pub groebner_basis: Vec<String>,
    pub we_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub p: u32,
    pub d: usize,
    pub order: MonomialOrder,
    pub f: String,
    pub s: u32,
    pub levels: Vec<ChainLevelJson>,
    pub stable_ideal: Vec<String>,
}

impl ChainJson {
    pub fn from_chain(chain: &ChainResult) -> Self {
        let ring = chain.f.ring();
        ChainJson {
            p: ring.p(),
            d: ring.nvars(),
            order: ring.order(),
            f: chain.f.to_string(),
            s: chain.s,
            levels: chain
                .levels
                .iter()
                .map(|l| ChainLevelJson {
                    n: l.n,
                    generators: texts(l.ideal.generators()),
                    groebner_basis: texts(l.basis.basis()),
                    we_dim: l.we_dim,
                })
                .collect(),
            stable_ideal: texts(chain.stable_ideal.generators()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CofactorJson {
    pub alpha: Vec<u32>,
    pub h: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandJson {
    pub alpha: Vec<u32>,
    pub h: String,
    pub q: OperatorJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactoredJson {
    pub p: u32,
    pub d: usize,
    pub summands: Vec<SummandJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertOperatorJson {
    Factored(FactoredJson),
    Expanded(OperatorJson),
}

impl CertOperatorJson {
    pub fn context(&self) -> (u32, usize) {
        match self {
            CertOperatorJson::Factored(o) => (o.p, o.d),
            CertOperatorJson::Expanded(o) => (o.p, o.d),
        }
    }

    pub fn to_operator(&self, ring: &Ring) -> Result<CertOperator> {
        match self {
            CertOperatorJson::Expanded(op) => Ok(CertOperator::Expanded(op.to_op(ring)?)),
            CertOperatorJson::Factored(fj) => {
                if fj.p != ring.p() || fj.d != ring.nvars() {
                    return Err(Error::mismatch("factored operator context differs from the ring"));
                }
                let summands = fj
                    .summands
                    .iter()
                    .map(|s| {
                        Ok(Summand {
                            alpha: index(ring, &s.alpha, "alpha")?,
                            h: ring.parse(&s.h)?,
                            q: s.q.to_op(ring)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CertOperator::Factored(FactoredOperator::new(ring, summands)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub check: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub p: u32,
    pub d: usize,
    pub order: MonomialOrder,
    pub f: String,
    pub s: u32,
    pub stable_ideal: Vec<String>,
    pub cofactors: Vec<CofactorJson>,
    pub operator: CertOperatorJson,
    pub verified: bool,
    pub transcript: Vec<CheckJson>,
}

impl CertificateJson {
    pub fn from_certificate(cert: &GenerationCertificate) -> Self {
        let ring = cert.f.ring();
        let operator = match &cert.operator {
            CertOperator::Expanded(op) => CertOperatorJson::Expanded(OperatorJson::from_op(op)),
            CertOperator::Factored(op) => CertOperatorJson::Factored(FactoredJson {
                p: ring.p(),
                d: ring.nvars(),
                summands: op
                    .summands()
                    .iter()
                    .map(|s| SummandJson {
                        alpha: s.alpha.to_vec(),
                        h: s.h.to_string(),
                        q: OperatorJson::from_op(&s.q),
                    })
                    .collect(),
            }),
        };
        CertificateJson {
            p: ring.p(),
            d: ring.nvars(),
            order: ring.order(),
            f: cert.f.to_string(),
            s: cert.s,
            stable_ideal: texts(&cert.stable_ideal),
            cofactors: cert
                .cofactors
                .iter()
                .map(|(a, h)| CofactorJson {
                    alpha: a.to_vec(),
                    h: h.to_string(),
                })
                .collect(),
            operator,
            verified: cert.verified,
            transcript: cert
                .transcript
                .iter()
                .map(|c| CheckJson {
                    check: c.name.clone(),
                    ok: c.ok,
                })
                .collect(),
        }
    }

    /// Rebuilds the certificate; stored check outcomes are carried over as data only.
    pub fn to_certificate(&self) -> Result<GenerationCertificate> {
        let ring = Ring::with_order(self.p as u64, self.d, self.order)?;
        let cofactors = self
            .cofactors
            .iter()
            .map(|c| Ok((index(&ring, &c.alpha, "alpha")?, ring.parse(&c.h)?)))
            .collect::<Result<Vec<_>>>()?;
        let operator = self.operator.to_operator(&ring)?;
        Ok(GenerationCertificate {
            f: ring.parse(&self.f)?,
            s: self.s,
            stable_ideal: parse_all(&ring, &self.stable_ideal)?,
            cofactors,
            operator,
            verified: self.verified,
            transcript: self
                .transcript
                .iter()
                .map(|c| Check {
                    name: c.check.clone(),
                    ok: c.ok,
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationJson {
    pub p: u32,
    pub d: usize,
    pub f: String,
    pub numerator: String,
    /// The denominator is `f^(p^level)`.
    pub level: u32,
}

impl LocalizationJson {
    pub fn from_element(u: &LocalizationElement) -> Self {
        let ring = u.ambient().ring();
        LocalizationJson {
            p: ring.p(),
            d: ring.nvars(),
            f: u.ambient().to_string(),
            numerator: u.numerator().to_string(),
            level: u.level(),
        }
    }

    pub fn to_element(&self, ring: &Ring) -> Result<LocalizationElement> {
        LocalizationElement::new(&ring.parse(&self.f)?, &ring.parse(&self.numerator)?, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadricJson {
    pub p: u32,
    pub alpha: Vec<u32>,
    pub a: u32,
    pub operator: OperatorJson,
}

impl QuadricJson {
    pub fn from_example(ex: &QuadricExample) -> Self {
        QuadricJson {
            p: ex.q.ring().p(),
            alpha: ex.alpha.to_vec(),
            a: ex.a.value(),
            operator: OperatorJson::from_op(&ex.q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobdecomp::decompose;
    use crate::generation::frobenius_descent;
    use crate::ideal_chain::{stabilization, Limits};
    use crate::poly::tests::ring;

    #[test]
    fn operator_schema() {
        let r = ring(5, 1);
        let op = DiffOp::from_terms(
            &r,
            [
                (MultiIndex::new(vec![0]), MultiIndex::new(vec![0]), 1),
                (MultiIndex::new(vec![1]), MultiIndex::new(vec![1]), 3),
            ],
        );
        let text = serde_json::to_string(&OperatorJson::from_op(&op)).unwrap();
        assert_eq!(
            text,
            r#"{"p":5,"d":1,"terms":[{"x":[0],"d":[0],"c":1},{"x":[1],"d":[1],"c":3}]}"#
        );
        let back: OperatorJson = from_str(&text).unwrap();
        assert_eq!(back.to_op(&r).unwrap(), op);
    }

    #[test]
    fn operator_validation() {
        let r = ring(5, 1);
        let bad = r#"{"p":5,"d":1,"terms":[{"x":[0],"d":[0],"c":5}]}"#;
        assert!(from_str::<OperatorJson>(bad).unwrap().to_op(&r).is_err());
        let dup = r#"{"p":5,"d":1,"terms":[{"x":[0],"d":[0],"c":1},{"x":[0],"d":[0],"c":2}]}"#;
        assert!(from_str::<OperatorJson>(dup).unwrap().to_op(&r).is_err());
        let short = r#"{"p":5,"d":1,"terms":[{"x":[],"d":[0],"c":1}]}"#;
        assert!(from_str::<OperatorJson>(short).unwrap().to_op(&r).is_err());
        assert!(matches!(from_str::<OperatorJson>("{"), Err(Error::Json(_))));
    }

    #[test]
    fn certificate_round_trip() {
        let lim = Limits::default();
        for (p, d, f) in [(3, 2, "x1^2 + x2^3"), (2, 4, "x1^2+x2^2+x3^2+x4^2"), (5, 1, "x1")] {
            let r = ring(p, d);
            let cert = frobenius_descent(&r.parse(f).unwrap(), &lim).unwrap();
            for c in [cert.clone(), cert.expanded(&lim).unwrap()] {
                let j = CertificateJson::from_certificate(&c);
                let text = to_string(&j).unwrap();
                let parsed: CertificateJson = from_str(&text).unwrap();
                assert_eq!(parsed, j);
                let back = parsed.to_certificate().unwrap();
                assert_eq!(back.operator, c.operator);
                assert_eq!(back.cofactors, c.cofactors);
                assert_eq!(to_string(&CertificateJson::from_certificate(&back)).unwrap(), text);
            }
        }
    }

    #[test]
    fn decomposition_and_chain_round_trip() {
        let r = ring(3, 1);
        let dec = decompose(&r.parse("x1^3 + x1").unwrap(), 1).unwrap();
        let j = DecompositionJson::from_decomposition(&dec);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"p":3,"d":1,"n":1,"parts":[{"alpha":[0],"root":"x1"},{"alpha":[1],"root":"1"}]}"#
        );
        let back = j.to_decomposition(&r).unwrap();
        assert_eq!(back.parts(), dec.parts());

        let r2 = ring(3, 2);
        let chain = stabilization(&r2.parse("x1^2 + x2^3").unwrap(), &Limits::default()).unwrap();
        let j = ChainJson::from_chain(&chain);
        let text = to_string(&j).unwrap();
        assert_eq!(from_str::<ChainJson>(&text).unwrap(), j);
    }
}
