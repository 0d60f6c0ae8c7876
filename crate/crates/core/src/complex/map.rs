use std::fmt;
use std::sync::Arc;

use super::complex::{Chain, Complex};
use super::grading::{forced_monomial, Bigrading};
use crate::algebra::{Monomial, MonomialMatrix, Poly};
use crate::error::{Error, Result};

/// How a map interacts with the ring action.
///
/// A skew map satisfies `f(U^i V^j x) = V^i U^j f(x)` and interchanges the
/// two gradings. Over F2[U] both modes coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapMode {
    Linear,
    Skew,
}

impl MapMode {
    pub fn compose(self, other: MapMode) -> MapMode {
        if self == other {
            MapMode::Linear
        } else {
            MapMode::Skew
        }
    }

    pub fn apply(self, g: Bigrading) -> Bigrading {
        match self {
            MapMode::Linear => g,
            MapMode::Skew => g.swap(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapMode::Linear => "linear",
            MapMode::Skew => "skew",
        }
    }
}

impl fmt::Display for MapMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// True when two complexes can be treated as the same object.
pub fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A module map between complexes. Column `j` of `entries` is the image of
/// source generator `j` in target coordinates.
#[derive(Debug, Clone)]
pub struct GradedMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    mode: MapMode,
    degree: Bigrading,
    entries: MonomialMatrix,
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.degree == other.degree
            && self.entries == other.entries
            && same_complex(&self.source, &other.source)
            && same_complex(&self.target, &other.target)
    }
}

impl GradedMap {
    pub fn new(
        source: Arc<Complex>,
        target: Arc<Complex>,
        mode: MapMode,
        degree: Bigrading,
        entries: MonomialMatrix,
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch(source.ring(), target.ring()));
        }
        if entries.ring() != source.ring() {
            return Err(Error::RingMismatch(entries.ring(), source.ring()));
        }
        if entries.nrows() != target.len() || entries.ncols() != source.len() {
            return Err(Error::Structure(format!(
                "map matrix is {}x{} but the complexes have {} and {} generators",
                entries.nrows(),
                entries.ncols(),
                target.len(),
                source.len()
            )));
        }
        if source.ring() == crate::algebra::Ring::OneVariable && degree.u != degree.v {
            return Err(Error::Structure(format!("F2[U] map with bidegree {degree}")));
        }
        Ok(GradedMap { source, target, mode, degree, entries })
    }

    pub fn zero(source: Arc<Complex>, target: Arc<Complex>, mode: MapMode, degree: Bigrading) -> Result<Self> {
        let entries = MonomialMatrix::zeros(source.ring(), target.len(), source.len());
        GradedMap::new(source, target, mode, degree, entries)
    }

    pub fn identity(c: &Arc<Complex>) -> Self {
        GradedMap::new(
            c.clone(),
            c.clone(),
            MapMode::Linear,
            Bigrading::ZERO,
            MonomialMatrix::identity(c.ring(), c.len()),
        )
        .expect("identity is well formed")
    }

    /// Builds a map from images given by generator id: each source id maps to
    /// a list of `(target id, monomial)` terms.
    pub fn from_images<'a>(
        source: Arc<Complex>,
        target: Arc<Complex>,
        mode: MapMode,
        degree: Bigrading,
        images: impl IntoIterator<Item = (&'a str, Vec<(&'a str, Monomial)>)>,
    ) -> Result<Self> {
        let mut entries = MonomialMatrix::zeros(source.ring(), target.len(), source.len());
        for (s, terms) in images {
            let j = source.require_index(s)?;
            for (t, m) in terms {
                let i = target.require_index(t)?;
                if !source.ring().contains(m) {
                    return Err(Error::NotInRing(m.to_string(), source.ring()));
                }
                entries.add_monomial(i, j, m);
            }
        }
        GradedMap::new(source, target, mode, degree, entries)
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn mode(&self) -> MapMode {
        self.mode
    }

    pub fn degree(&self) -> Bigrading {
        self.degree
    }

    pub fn entries(&self) -> &MonomialMatrix {
        &self.entries
    }

    pub fn is_endomorphism(&self) -> bool {
        same_complex(&self.source, &self.target)
    }

    /// Same map viewed between structurally equal complexes.
    pub fn rebase(&self, source: &Arc<Complex>, target: &Arc<Complex>) -> Result<GradedMap> {
        if !same_complex(&self.source, source) || !same_complex(&self.target, target) {
            return Err(Error::Incompatible("rebase onto different complexes".into()));
        }
        Ok(GradedMap { source: source.clone(), target: target.clone(), ..self.clone() })
    }

    pub fn with_mode(&self, mode: MapMode) -> GradedMap {
        GradedMap { mode, ..self.clone() }
    }

    pub fn image(&self, generator: usize) -> &Chain {
        self.entries.column(generator)
    }

    /// `f(chain)`, applying the U/V swap to coefficients for skew maps.
    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (j, p) in chain {
            let coef = match self.mode {
                MapMode::Linear => p.clone(),
                MapMode::Skew => p.swap(),
            };
            super::complex::chain_add_scaled(&mut out, self.image(*j), &coef);
        }
        out
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if !same_complex(&g.target, &self.source) {
            return Err(Error::Incompatible("target of the inner map is not the source of the outer map".into()));
        }
        let entries = self.entries.mul_twisted(&g.entries, self.mode == MapMode::Skew)?;
        GradedMap::new(
            g.source.clone(),
            self.target.clone(),
            self.mode.compose(g.mode),
            self.degree + self.mode.apply(g.degree),
            entries,
        )
    }

    fn check_parallel(&self, other: &GradedMap) -> Result<()> {
        if !same_complex(&self.source, &other.source) || !same_complex(&self.target, &other.target) {
            return Err(Error::Incompatible("maps have different source or target".into()));
        }
        if self.mode != other.mode {
            return Err(Error::Incompatible(format!("cannot add a {} map to a {} map", self.mode, other.mode)));
        }
        if self.degree != other.degree {
            return Err(Error::Incompatible(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other)?;
        Ok(GradedMap { entries: self.entries.add(&other.entries)?, ..self.clone() })
    }

    /// `id + self` for an endomorphism of degree zero.
    pub fn plus_identity(&self) -> Result<GradedMap> {
        GradedMap::identity(&self.source).with_mode(self.mode).add(self)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// The monomial forced on entry `(target, source)` by the gradings.
    pub fn forced_entry(&self, target: usize, source: usize) -> Option<Monomial> {
        let image = self.mode.apply(self.source.grading(source)) + self.degree;
        forced_monomial(self.source.ring(), self.target.grading(target), image)
    }

    /// Entries `(target, source)` that are not the forced monomial.
    pub fn homogeneity_violations(&self) -> Vec<(usize, usize)> {
        self.entries
            .entries()
            .filter(|(t, s, p)| self.forced_entry(*t, *s).is_none_or(|m| p.as_monomial() != Some(m)))
            .map(|(t, s, _)| (t, s))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneity_violations().is_empty()
    }

    /// `∂ f + f ∂` (zero iff `f` is a chain map).
    pub fn commutator_with_differential(&self) -> Result<GradedMap> {
        let left = self.target.differential_map().compose(self)?;
        let right = self.compose(&self.source.differential_map())?;
        left.add(&right)
    }

    pub fn is_chain_map(&self) -> bool {
        self.commutator_with_differential().is_ok_and(|c| c.is_zero())
    }

    /// Human-readable images, one `gen -> image` per generator with a
    /// nonzero image.
    pub fn describe(&self) -> Vec<(String, String)> {
        (0..self.source.len())
            .map(|j| (self.source.id(j).to_string(), self.target.format_chain(self.image(j))))
            .collect()
    }

    /// The coefficient of target generator `t` in the image of `s`.
    pub fn entry(&self, t: usize, s: usize) -> Option<&Poly> {
        self.entries.get(t, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use crate::complex::ComplexBuilder;

    fn square() -> Arc<Complex> {
        let mut b = ComplexBuilder::new(Ring::TwoVariable);
        b.generator("x", Bigrading::ZERO).unwrap();
        b.generator("a", Bigrading::ZERO).unwrap();
        b.generator("b", Bigrading::new(1, -1)).unwrap();
        b.generator("c", Bigrading::new(-1, 1)).unwrap();
        b.generator("d", Bigrading::ZERO).unwrap();
        b.arrow("a", "b", Monomial::new(1, 0)).unwrap();
        b.arrow("a", "c", Monomial::new(0, 1)).unwrap();
        b.arrow("b", "d", Monomial::new(0, 1)).unwrap();
        b.arrow("c", "d", Monomial::new(1, 0)).unwrap();
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn identity_is_chain_map() {
        let c = square();
        assert!(GradedMap::identity(&c).is_chain_map());
    }

    #[test]
    fn corrupted_map_is_not_chain_map() {
        let c = square();
        let one = Monomial::ONE;
        // a ↦ x alone is a chain map: both ∂x and the images of b, c vanish.
        let f =
            GradedMap::from_images(c.clone(), c.clone(), MapMode::Linear, Bigrading::ZERO, [("a", vec![("x", one)])])
                .unwrap();
        assert!(f.is_homogeneous());
        assert!(f.is_chain_map());
        // The identity with a ↦ x instead breaks ∂a = Ub + Vc.
        let g = GradedMap::from_images(
            c.clone(),
            c.clone(),
            MapMode::Linear,
            Bigrading::ZERO,
            [
                ("x", vec![("x", one)]),
                ("a", vec![("x", one)]),
                ("b", vec![("b", one)]),
                ("c", vec![("c", one)]),
                ("d", vec![("d", one)]),
            ],
        )
        .unwrap();
        assert!(!g.is_chain_map());
    }

    #[test]
    fn skew_composition_twists_inner_coefficients() {
        let c = square();
        let one = Monomial::ONE;
        let iota = GradedMap::from_images(
            c.clone(),
            c.clone(),
            MapMode::Skew,
            Bigrading::ZERO,
            [
                ("x", vec![("x", one), ("d", one)]),
                ("a", vec![("a", one), ("x", one)]),
                ("b", vec![("c", one)]),
                ("c", vec![("b", one)]),
                ("d", vec![("d", one)]),
            ],
        )
        .unwrap();
        assert!(iota.is_chain_map());
        let d = c.differential_map();
        let composite = iota.compose(&d).unwrap();
        assert_eq!(composite.mode(), MapMode::Skew);
        // ι(∂a) = ι(Ub + Vc) = V c + U b
        assert_eq!(c.format_chain(composite.image(1)), "U*b+V*c");
        let square_map = iota.compose(&iota).unwrap();
        assert_eq!(square_map.mode(), MapMode::Linear);
        assert_eq!(c.format_chain(square_map.image(1)), "a+d");
    }
}
