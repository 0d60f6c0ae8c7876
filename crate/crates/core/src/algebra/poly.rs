//! Polynomials over F2 in the variables U and V.
//!
//! Coefficients live in F2, so a polynomial is just the set of monomials
//! that appear in it. Addition is symmetric difference.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Coefficient ring of a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// F2[U,V], knot complexes.
    TwoVariable,
    /// F2[U], surgery complexes with U acting as the product UV.
    OneVariable,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::TwoVariable => "F2[U,V]",
            Ring::OneVariable => "F2[U]",
        }
    }

    pub fn contains(self, m: Monomial) -> bool {
        match self {
            Ring::TwoVariable => true,
            Ring::OneVariable => m.v == 0,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A monomial `U^u V^v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };

    pub const fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    pub const fn u_power(k: u32) -> Self {
        Monomial { u: k, v: 0 }
    }

    pub fn is_one(self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.u + other.u, self.v + other.v)
    }

    /// Interchange the roles of U and V.
    pub fn swap(self) -> Monomial {
        Monomial::new(self.v, self.u)
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.u <= other.u && self.v <= other.v
    }

    /// `other / self`, if exact.
    pub fn quotient(self, other: Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial::new(other.u - self.u, other.v - self.v))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut write_var = |name: &str, k: u32| -> fmt::Result {
            match k {
                0 => Ok(()),
                1 => f.write_str(name),
                _ => write!(f, "{name}^{k}"),
            }
        };
        write_var("U", self.u)?;
        write_var("V", self.v)
    }
}

/// An element of F2[U,V] or F2[U].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Self {
        Poly { ring, terms: BTreeSet::new() }
    }

    pub fn one(ring: Ring) -> Self {
        Poly::monomial(ring, Monomial::ONE).expect("1 lies in every ring")
    }

    pub fn monomial(ring: Ring, m: Monomial) -> Result<Self> {
        Poly::from_terms(ring, [m])
    }

    /// Builds a polynomial from a list of monomials, cancelling repeats in pairs.
    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = Poly::zero(ring);
        for m in terms {
            if !ring.contains(m) {
                return Err(Error::NotInRing(m.to_string(), ring));
            }
            p.toggle(m);
        }
        Ok(p)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_monomial() == Some(Monomial::ONE)
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single monomial of a one-term polynomial.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            self.terms.iter().next().copied()
        } else {
            None
        }
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let terms = self.terms.symmetric_difference(&other.terms).copied().collect();
        Ok(Poly { ring: self.ring, terms })
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut out = Poly::zero(self.ring);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(*b));
            }
        }
        Ok(out)
    }

    /// In-place `self += other`; both operands must share a ring.
    pub fn add_assign(&mut self, other: &Poly) {
        debug_assert_eq!(self.ring, other.ring);
        for m in &other.terms {
            self.toggle(*m);
        }
    }

    pub fn add_monomial(&mut self, m: Monomial) {
        debug_assert!(self.ring.contains(m));
        self.toggle(m);
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly {
        Poly { ring: self.ring, terms: self.terms.iter().map(|t| t.mul(m)).collect() }
    }

    /// Swap U and V. The identity on F2[U].
    pub fn swap(&self) -> Poly {
        match self.ring {
            Ring::OneVariable => self.clone(),
            Ring::TwoVariable => Poly { ring: self.ring, terms: self.terms.iter().map(|m| m.swap()).collect() },
        }
    }

    /// Formal partial derivative with respect to U (`wrt_u`) or V, mod 2.
    pub fn derivative(&self, wrt_u: bool) -> Poly {
        let mut out = Poly::zero(self.ring);
        for m in &self.terms {
            let k = if wrt_u { m.u } else { m.v };
            if k % 2 == 1 {
                let d = if wrt_u { Monomial::new(m.u - 1, m.v) } else { Monomial::new(m.u, m.v - 1) };
                out.toggle(d);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

pub fn poly_arith(op: PolyOp, p: &Poly, q: &Poly) -> Result<Poly> {
    match op {
        PolyOp::Add => p.add(q),
        PolyOp::Mul => p.mul(q),
    }
}
