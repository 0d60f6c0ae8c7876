use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

use super::grading::{forced_monomial, monomial_grading, Bigrading};
use super::map::{GradedMap, MapMode};
use crate::algebra::{Monomial, MonomialMatrix, Poly, Ring};
use crate::error::{Error, Result};

/// A ring element attached to each generator index; absent means zero.
pub type Chain = BTreeMap<usize, Poly>;

/// `acc += coef * other`
pub fn chain_add_scaled(acc: &mut Chain, other: &Chain, coef: &Poly) {
    for (i, p) in other {
        let term = p.mul(coef).expect("chain entries share a ring");
        if term.is_zero() {
            continue;
        }
        let slot = acc.entry(*i).or_insert_with(|| Poly::zero(term.ring()));
        slot.add_assign(&term);
        if slot.is_zero() {
            acc.remove(i);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    pub grading: Bigrading,
}

/// A finitely generated free chain complex over F2[U,V] or F2[U].
///
/// Differential entries are stored as a matrix whose column `j` is `∂` of
/// generator `j`. Construction only checks structure; use
/// [`validate_complex`] for `∂² = 0` and homogeneity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
    differential: MonomialMatrix,
    shift: Rational64,
}

impl Complex {
    pub fn new(
        ring: Ring,
        generators: Vec<Generator>,
        differential: MonomialMatrix,
        shift: Rational64,
    ) -> Result<Self> {
        let n = generators.len();
        if differential.ring() != ring {
            return Err(Error::RingMismatch(differential.ring(), ring));
        }
        if differential.nrows() != n || differential.ncols() != n {
            return Err(Error::Structure(format!(
                "differential is {}x{} but there are {n} generators",
                differential.nrows(),
                differential.ncols()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, g) in generators.iter().enumerate() {
            if g.id.is_empty() {
                return Err(Error::Structure(format!("generator {i} has an empty id")));
            }
            if ring == Ring::OneVariable && g.grading.u != g.grading.v {
                return Err(Error::Structure(format!(
                    "generator `{}` of an F2[U] complex has unequal gradings {}",
                    g.id, g.grading
                )));
            }
            if index.insert(g.id.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.id.clone()));
            }
        }
        if ring == Ring::TwoVariable && *shift.numer() != 0 {
            return Err(Error::Structure("only F2[U] complexes carry a grading shift".into()));
        }
        Ok(Complex { ring, generators, index, differential, shift })
    }

    pub fn zero(ring: Ring) -> Self {
        Complex::new(ring, Vec::new(), MonomialMatrix::zeros(ring, 0, 0), Rational64::from_integer(0))
            .expect("empty complex is well formed")
    }

    /// One generator named `id` in grading zero with vanishing differential.
    pub fn trivial(ring: Ring, id: &str) -> Self {
        let g = Generator { id: id.to_string(), grading: Bigrading::ZERO };
        Complex::new(ring, vec![g], MonomialMatrix::zeros(ring, 1, 1), Rational64::from_integer(0))
            .expect("trivial complex is well formed")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn id(&self, i: usize) -> &str {
        &self.generators[i].id
    }

    pub fn grading(&self, i: usize) -> Bigrading {
        self.generators[i].grading
    }

    /// Maslov grading of a generator of an F2[U] complex.
    pub fn maslov(&self, i: usize) -> i64 {
        self.generators[i].grading.u
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require_index(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn differential(&self) -> &MonomialMatrix {
        &self.differential
    }

    pub fn boundary(&self, i: usize) -> &Chain {
        self.differential.column(i)
    }

    pub fn shift(&self) -> Rational64 {
        self.shift
    }

    pub fn with_shift(&self, shift: Rational64) -> Result<Complex> {
        Complex::new(self.ring, self.generators.clone(), self.differential.clone(), shift)
    }

    /// The differential as a linear endomorphism of degree (-1, -1).
    pub fn differential_map(self: &Arc<Self>) -> GradedMap {
        GradedMap::new(self.clone(), self.clone(), MapMode::Linear, Bigrading::DIFFERENTIAL, self.differential.clone())
            .expect("differential has the right shape")
    }

    /// `∂` applied to a chain.
    pub fn apply_differential(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (i, p) in chain {
            chain_add_scaled(&mut out, self.boundary(*i), p);
        }
        out
    }

    /// Renders a chain like `a|d+d|a` or `U^2*x`; terms in generator order.
    pub fn format_chain(&self, chain: &Chain) -> String {
        if chain.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, p) in chain {
            for m in p.terms() {
                if m.is_one() {
                    parts.push(self.id(*i).to_string());
                } else {
                    parts.push(format!("{m}*{}", self.id(*i)));
                }
            }
        }
        parts.join("+")
    }
}

/// Incremental construction of a complex by generator id.
#[derive(Debug, Clone)]
pub struct ComplexBuilder {
    ring: Ring,
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
    arrows: Vec<(usize, usize, Monomial)>,
    shift: Rational64,
}

impl ComplexBuilder {
    pub fn new(ring: Ring) -> Self {
        ComplexBuilder {
            ring,
            generators: Vec::new(),
            index: HashMap::new(),
            arrows: Vec::new(),
            shift: Rational64::from_integer(0),
        }
    }

    pub fn generator(&mut self, id: &str, grading: Bigrading) -> Result<&mut Self> {
        if self.index.contains_key(id) {
            return Err(Error::DuplicateGenerator(id.to_string()));
        }
        self.index.insert(id.to_string(), self.generators.len());
        self.generators.push(Generator { id: id.to_string(), grading });
        Ok(self)
    }

    /// Adds `m * target` to `∂ source`.
    pub fn arrow(&mut self, source: &str, target: &str, m: Monomial) -> Result<&mut Self> {
        let s = *self.index.get(source).ok_or_else(|| Error::UnknownGenerator(source.to_string()))?;
        let t = *self.index.get(target).ok_or_else(|| Error::UnknownGenerator(target.to_string()))?;
        if !self.ring.contains(m) {
            return Err(Error::NotInRing(m.to_string(), self.ring));
        }
        self.arrows.push((s, t, m));
        Ok(self)
    }

    pub fn shift(&mut self, shift: Rational64) -> &mut Self {
        self.shift = shift;
        self
    }

    pub fn build(&self) -> Result<Complex> {
        let n = self.generators.len();
        let mut d = MonomialMatrix::zeros(self.ring, n, n);
        for &(s, t, m) in &self.arrows {
            d.add_monomial(t, s, m);
        }
        Complex::new(self.ring, self.generators.clone(), d, self.shift)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `∂²` has a nonzero entry from `source` to `target`.
    SquareNonzero {
        source: String,
        target: String,
    },
    /// The entry of `∂ source` on `target` does not have degree (-1, -1).
    Inhomogeneous {
        source: String,
        target: String,
    },
    NonIntegerAlexander {
        generator: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SquareNonzero { source, target } => {
                write!(f, "∂² ≠ 0: ∂²({source}) has a {target} component")
            }
            Violation::Inhomogeneous { source, target } => {
                write!(f, "inhomogeneous differential entry ({source}, {target})")
            }
            Violation::NonIntegerAlexander { generator } => {
                write!(f, "generator {generator} has a half-integer Alexander grading")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Turns a failing report into an error.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let text: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::Structure(text.join("; ")))
    }
}

/// Checks `∂² = 0`, homogeneity of `∂` and integrality of Alexander gradings.
pub fn validate_complex(c: &Complex) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, g) in c.generators().iter().enumerate() {
        if g.grading.alexander().is_none() {
            violations.push(Violation::NonIntegerAlexander { generator: g.id.clone() });
        }
        let image = g.grading + Bigrading::DIFFERENTIAL;
        for (t, p) in c.boundary(i) {
            let ok = forced_monomial(c.ring(), c.grading(*t), image).is_some_and(|m| p.as_monomial() == Some(m));
            if !ok {
                violations.push(Violation::Inhomogeneous { source: g.id.clone(), target: c.id(*t).to_string() });
            }
        }
    }
    let square = c.differential().mul(c.differential()).expect("square matrix");
    for (t, s, _) in square.entries() {
        violations.push(Violation::SquareNonzero { source: c.id(s).to_string(), target: c.id(t).to_string() });
    }
    ValidationReport { violations }
}

/// Grading of `m * generator`.
pub fn term_grading(c: &Complex, generator: usize, m: Monomial) -> Bigrading {
    c.grading(generator) + monomial_grading(c.ring(), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step() -> Complex {
        let mut b = ComplexBuilder::new(Ring::TwoVariable);
        b.generator("a", Bigrading::ZERO).unwrap();
        b.generator("b", Bigrading::new(1, -1)).unwrap();
        b.arrow("a", "b", Monomial::new(1, 0)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn trivial_complex_is_valid() {
        assert!(validate_complex(&Complex::trivial(Ring::TwoVariable, "x")).is_valid());
        assert!(validate_complex(&Complex::zero(Ring::OneVariable)).is_valid());
    }

    #[test]
    fn builder_rejects_bad_references() {
        let mut b = ComplexBuilder::new(Ring::TwoVariable);
        b.generator("a", Bigrading::ZERO).unwrap();
        assert_eq!(b.generator("a", Bigrading::ZERO).err(), Some(Error::DuplicateGenerator("a".into())));
        assert_eq!(b.arrow("a", "q", Monomial::ONE).err(), Some(Error::UnknownGenerator("q".into())));
    }

    #[test]
    fn inhomogeneous_entry_reported() {
        let mut b = ComplexBuilder::new(Ring::TwoVariable);
        b.generator("a", Bigrading::ZERO).unwrap();
        b.generator("b", Bigrading::new(1, -1)).unwrap();
        b.arrow("a", "b", Monomial::new(0, 1)).unwrap();
        let report = validate_complex(&b.build().unwrap());
        assert_eq!(report.violations, vec![Violation::Inhomogeneous { source: "a".into(), target: "b".into() }]);
        assert!(validate_complex(&two_step()).is_valid());
    }

    #[test]
    fn chain_formatting() {
        let c = two_step();
        let mut chain = Chain::new();
        chain.insert(0, Poly::one(Ring::TwoVariable));
        chain.insert(1, Poly::monomial(Ring::TwoVariable, Monomial::new(2, 0)).unwrap());
        assert_eq!(c.format_chain(&chain), "a+U^2*b");
        assert_eq!(c.format_chain(&c.apply_differential(&chain)), "U*b");
    }
}
