//! Text grammar: `[+|-] term ((+|-) term)*`, `term := factor (* factor)*`,
//! `factor := natural | x<index> [^ natural]`. Whitespace is ignored and
//! integer literals are reduced modulo p.

use super::{MultiIndex, Polynomial, Ring};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    /// Parses one factor, folding it into `(exponent, coeff)`.
    fn factor(&mut self, exponent: &mut [u32], coeff: &mut u32) -> Result<()> {
        let field = self.ring.field();
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.natural()?;
                *coeff = field.mul(*coeff, field.reduce(n));
                Ok(())
            }
            Some(b'x') => {
                let at = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(Error::parse(self.pos, "expected a variable index after `x`"));
                }
                let idx = self.natural()?;
                if idx == 0 || idx > self.ring.nvars() as u64 {
                    return Err(Error::parse(
                        at,
                        format!("unknown variable x{idx} (ring has x1..x{})", self.ring.nvars()),
                    ));
                }
                let mut power = 1u64;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    power = self.natural()?;
                }
                let slot = &mut exponent[idx as usize - 1];
                *slot = u32::try_from(*slot as u64 + power)
                    .map_err(|_| Error::parse(at, "exponent too large"))?;
                Ok(())
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("unexpected character `{}`", c as char),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<(MultiIndex, u32)> {
        let mut exponent = vec![0u32; self.ring.nvars()];
        let mut coeff = 1 % self.ring.p();
        self.factor(&mut exponent, &mut coeff)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exponent, &mut coeff)?;
        }
        Ok((MultiIndex::new(exponent), coeff))
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let field = self.ring.field().clone();
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            terms.push((e, if negate { field.neg(c) } else { c }));
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                None => break,
                Some(c) => {
                    return Err(Error::parse(
                        self.pos,
                        format!("expected `+`, `-` or `*`, found `{}`", c as char),
                    ))
                }
            }
            self.pos += 1;
        }
        Ok(self.ring.from_terms(terms))
    }
}

pub(super) fn parse(ring: &Ring, text: &str) -> Result<Polynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    parser.polynomial()
}

#[cfg(test)]
mod tests {
    use crate::error::Error;
    use crate::poly::tests::ring;

    #[test]
    fn grammar() {
        let r = ring(5, 3);
        let f = r.parse("2*x1^2*x2 + x3 - 1").unwrap();
        assert_eq!(f.to_string(), "2*x1^2*x2 + x3 + 4");
        assert_eq!(r.parse(" - x1 ").unwrap(), r.parse("4*x1").unwrap());
        assert_eq!(r.parse("x1*3*x1").unwrap(), r.parse("3*x1^2").unwrap());
        assert_eq!(r.parse("7").unwrap(), r.constant(2));
        assert!(r.parse("0").unwrap().is_zero());
        assert_eq!(r.parse("x1^0").unwrap(), r.one());
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring(3, 2);
        match r.parse("x1 + x3") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 5);
                assert!(msg.contains("x3"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(r.parse("x1 +"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(r.parse("x1 $ x2"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(r.parse("x^2"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(r.parse("x0"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(r.parse("x1^"), Err(Error::Parse { .. })));
    }
}
