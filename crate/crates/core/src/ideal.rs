use std::fmt;

use crate::error::Result;
use crate::poly::{Polynomial, Ring};

/// A finitely generated ideal, remembered by its generator list.
///
/// Zero generators are dropped on construction; the remaining list keeps
/// insertion order.
#[derive(Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            ring.check_compatible(g.ring())?;
            if !g.is_zero() {
                gens.push(g.with_order(ring.order()));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// The ideal generated by the `p^n`-th powers of the generators.
    pub fn frobenius_power(&self, n: u32) -> Result<Ideal> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.frobenius(n))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// Largest generator degree, `-1` for the zero ideal.
    pub fn max_degree(&self) -> i64 {
        self.generators.iter().map(Polynomial::degree).max().unwrap_or(-1)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}
