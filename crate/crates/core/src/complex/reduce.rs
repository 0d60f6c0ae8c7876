use std::sync::Arc;

use super::complex::{chain_add_scaled, Chain, Complex, Generator};
use super::grading::Bigrading;
use super::map::{GradedMap, MapMode};
use crate::algebra::{MonomialMatrix, Poly};
use crate::error::{Error, Result};

/// A deformation retraction onto a complex without unit differential
/// entries: `project ∘ include = id` and
/// `include ∘ project = id + ∂h + h∂`.
#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub minimal: Arc<Complex>,
    pub include: GradedMap,
    pub project: GradedMap,
    pub homotopy: GradedMap,
}

impl ReductionCertificate {
    /// Re-checks every identity of the certificate by direct computation.
    pub fn verify(&self) -> Result<bool> {
        if !self.include.is_chain_map() || !self.project.is_chain_map() {
            return Ok(false);
        }
        if self.project.compose(&self.include)? != GradedMap::identity(&self.minimal) {
            return Ok(false);
        }
        let lhs = self.include.compose(&self.project)?.plus_identity()?;
        if lhs != self.homotopy.commutator_with_differential()? {
            return Ok(false);
        }
        let has_unit = self.minimal.differential().entries().any(|(_, _, p)| p.terms().any(|m| m.is_one()));
        Ok(!has_unit)
    }

    /// `project ∘ f ∘ include` for an endomorphism `f` of the original complex.
    pub fn transfer(&self, f: &GradedMap) -> Result<GradedMap> {
        self.project.compose(f)?.compose(&self.include)
    }

    /// `include ∘ g ∘ project` for an endomorphism `g` of the minimal model.
    pub fn pull_back(&self, g: &GradedMap) -> Result<GradedMap> {
        self.include.compose(g)?.compose(&self.project)
    }
}

fn coefficient(chain: &Chain, i: usize) -> Option<&Poly> {
    chain.get(&i)
}

/// Cancels unit differential entries one at a time until none remain.
///
/// At each step the source generator is the first (in generator order)
/// whose boundary has a unit coefficient, and the target is the first such
/// coefficient in that boundary. Each supplied endomorphism is transferred
/// to the minimal model as `project ∘ f ∘ include`.
pub fn reduce(c: &Arc<Complex>, maps: &[GradedMap]) -> Result<(ReductionCertificate, Vec<GradedMap>)> {
    let n = c.len();
    let ring = c.ring();
    let mut alive = vec![true; n];
    // Working differential on the surviving generators, in original indices.
    let mut d: Vec<Chain> = (0..n).map(|i| c.boundary(i).clone()).collect();
    // include(y) for surviving y, project(x) for every x, homotopy(x) for every x.
    let mut inc: Vec<Chain> = (0..n).map(|i| Chain::from([(i, Poly::one(ring))])).collect();
    let mut proj: Vec<Chain> = inc.clone();
    let mut hom: Vec<Chain> = vec![Chain::new(); n];

    loop {
        let pivot =
            (0..n).filter(|&s| alive[s]).find_map(|s| d[s].iter().find(|(_, p)| p.is_one()).map(|(t, _)| (s, *t)));
        let Some((s, t)) = pivot else { break };

        let mut z = d[s].clone();
        z.remove(&t);
        alive[s] = false;
        alive[t] = false;
        let inc_s = inc[s].clone();

        // ∂'y = (∂y without s, t) + ∂_{t,y} z
        for y in 0..n {
            if !alive[y] {
                continue;
            }
            let coef = d[y].remove(&t);
            d[y].remove(&s);
            if let Some(coef) = coef {
                chain_add_scaled(&mut d[y], &z, &coef);
                chain_add_scaled(&mut inc[y], &inc_s, &coef);
            }
        }
        for x in 0..n {
            proj[x].remove(&s);
            if let Some(coef) = proj[x].remove(&t) {
                chain_add_scaled(&mut proj[x], &z, &coef);
                chain_add_scaled(&mut hom[x], &inc_s, &coef);
            }
        }
        d[s].clear();
        d[t].clear();
    }

    let survivors: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &i) in survivors.iter().enumerate() {
        new_index[i] = k;
    }
    let m = survivors.len();
    let generators: Vec<Generator> = survivors.iter().map(|&i| c.generators()[i].clone()).collect();
    let mut dm = MonomialMatrix::zeros(ring, m, m);
    let mut im = MonomialMatrix::zeros(ring, n, m);
    for (k, &i) in survivors.iter().enumerate() {
        for (t, p) in &d[i] {
            dm.add_entry(new_index[*t], k, p);
        }
        for (t, p) in &inc[i] {
            im.add_entry(*t, k, p);
        }
    }
    let mut pm = MonomialMatrix::zeros(ring, m, n);
    let mut hm = MonomialMatrix::zeros(ring, n, n);
    for x in 0..n {
        for (t, p) in &proj[x] {
            if new_index[*t] == usize::MAX {
                return Err(Error::Internal("projection hit a cancelled generator".into()));
            }
            pm.add_entry(new_index[*t], x, p);
        }
        for (t, p) in &hom[x] {
            hm.add_entry(*t, x, p);
        }
    }

    let minimal = Arc::new(Complex::new(ring, generators, dm, c.shift())?);
    let cert = ReductionCertificate {
        include: GradedMap::new(minimal.clone(), c.clone(), MapMode::Linear, Bigrading::ZERO, im)?,
        project: GradedMap::new(c.clone(), minimal.clone(), MapMode::Linear, Bigrading::ZERO, pm)?,
        homotopy: GradedMap::new(c.clone(), c.clone(), MapMode::Linear, Bigrading::HOMOTOPY_STEP, hm)?,
        minimal,
    };
    let transferred = maps.iter().map(|f| cert.transfer(f)).collect::<Result<Vec<_>>>()?;
    Ok((cert, transferred))
}

/// Coefficient of generator `i` in a chain, as an owned polynomial.
pub fn chain_coefficient(chain: &Chain, i: usize, ring: crate::algebra::Ring) -> Poly {
    coefficient(chain, i).cloned().unwrap_or_else(|| Poly::zero(ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Ring};
    use crate::complex::ComplexBuilder;

    #[test]
    fn minimal_complex_is_untouched() {
        let c = Arc::new(Complex::trivial(Ring::OneVariable, "1"));
        let (cert, _) = reduce(&c, &[]).unwrap();
        assert_eq!(*cert.minimal, *c);
        assert!(cert.homotopy.is_zero());
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn acyclic_pair_cancels() {
        let mut b = ComplexBuilder::new(Ring::TwoVariable);
        b.generator("a", Bigrading::ZERO).unwrap();
        b.generator("b", Bigrading::new(-1, -1)).unwrap();
        b.arrow("a", "b", Monomial::ONE).unwrap();
        let c = Arc::new(b.build().unwrap());
        let (cert, _) = reduce(&c, &[]).unwrap();
        assert!(cert.minimal.is_empty());
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn zig_zag_composes() {
        // a -> b (unit), a -> U c, e -> b (unit): cancelling a-b leaves
        // ∂e = U c.
        let mut b = ComplexBuilder::new(Ring::OneVariable);
        b.generator("a", Bigrading::maslov(1)).unwrap();
        b.generator("e", Bigrading::maslov(1)).unwrap();
        b.generator("b", Bigrading::maslov(0)).unwrap();
        b.generator("c", Bigrading::maslov(2)).unwrap();
        b.arrow("a", "b", Monomial::ONE).unwrap();
        b.arrow("a", "c", Monomial::u_power(1)).unwrap();
        b.arrow("e", "b", Monomial::ONE).unwrap();
        let c = Arc::new(b.build().unwrap());
        let (cert, _) = reduce(&c, &[]).unwrap();
        assert_eq!(cert.minimal.len(), 2);
        let e = cert.minimal.require_index("e").unwrap();
        assert_eq!(cert.minimal.format_chain(cert.minimal.boundary(e)), "U*c");
        assert_eq!(c.format_chain(cert.include.image(e)), "a+e");
        assert!(cert.verify().unwrap());
    }
}
