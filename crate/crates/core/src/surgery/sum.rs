use std::sync::Arc;

use super::SurgeryComplex;
use crate::algebra::{MonomialMatrix, Poly, Ring};
use crate::complex::{
    dual_map_between, dualize, tensor_complex, tensor_index, tensor_maps_between, Bigrading, Chain, Complex, GradedMap,
    MapMode,
};
use crate::error::{Error, Result};

/// `S1 ⊗ S2` over F2[U] with `ι1 ⊗ ι2` and `τ1 ⊗ τ2`; shifts add.
pub fn connected_sum_surgery(s1: &SurgeryComplex, s2: &SurgeryComplex) -> Result<SurgeryComplex> {
    let c = Arc::new(tensor_complex(&s1.complex, &s2.complex)?);
    let iota = tensor_maps_between(&s1.iota, &s2.iota, &c, &c)?;
    let tau = tensor_maps_between(&s1.tau, &s2.tau, &c, &c)?;
    SurgeryComplex::new(c, iota, tau)
}

/// The dual complex with the dual ι and τ.
pub fn dual_surgery(s: &SurgeryComplex) -> Result<SurgeryComplex> {
    let (c, maps) = dualize(&s.complex, &[s.iota.clone(), s.tau.clone()])?;
    let [iota, tau]: [GradedMap; 2] = maps.try_into().expect("two maps");
    SurgeryComplex::new(c, iota, tau)
}

/// `f^∨ : T^∨ → S^∨` for `f : S → T`, between the given duals.
pub fn dual_surgery_map(
    f: &GradedMap,
    source_dual: &SurgeryComplex,
    target_dual: &SurgeryComplex,
) -> Result<GradedMap> {
    dual_map_between(f, &target_dual.complex, &source_dual.complex)
}

/// A generator-permuting map given by index images.
fn permutation(source: &Arc<Complex>, target: &Arc<Complex>, image: impl Fn(usize) -> usize) -> Result<GradedMap> {
    let mut entries = MonomialMatrix::zeros(Ring::OneVariable, target.len(), source.len());
    for j in 0..source.len() {
        entries.add_entry(image(j), j, &Poly::one(Ring::OneVariable));
    }
    GradedMap::new(source.clone(), target.clone(), MapMode::Linear, Bigrading::ZERO, entries)
}

/// Isomorphisms witnessing that the connected sum is unital and
/// associative.
#[derive(Debug, Clone)]
pub struct SumIsomorphisms {
    /// `S ⊗ 1 → S`.
    pub right_unit: (SurgeryComplex, SurgeryComplex, GradedMap),
    /// `1 ⊗ S → S`.
    pub left_unit: (SurgeryComplex, SurgeryComplex, GradedMap),
    /// `(S1 ⊗ S2) ⊗ S3 → S1 ⊗ (S2 ⊗ S3)`.
    pub associator: (SurgeryComplex, SurgeryComplex, GradedMap),
}

/// True if `f` is a bijection on generators with unit coefficients that is
/// a chain map, preserves gradings and commutes exactly with ι and τ.
pub fn is_equivariant_isomorphism(source: &SurgeryComplex, target: &SurgeryComplex, f: &GradedMap) -> Result<bool> {
    if source.complex.len() != target.complex.len() {
        return Ok(false);
    }
    let mut hit = vec![false; target.complex.len()];
    for j in 0..source.complex.len() {
        let image = f.image(j);
        if image.len() != 1 {
            return Ok(false);
        }
        let (&t, p) = image.iter().next().expect("one entry");
        if !p.is_one() || hit[t] || source.complex.grading(j) != target.complex.grading(t) {
            return Ok(false);
        }
        hit[t] = true;
    }
    Ok(f.is_chain_map()
        && f.compose(&source.iota)? == target.iota.compose(f)?
        && f.compose(&source.tau)? == target.tau.compose(f)?)
}

impl SumIsomorphisms {
    pub fn build(s1: &SurgeryComplex, s2: &SurgeryComplex, s3: &SurgeryComplex) -> Result<Self> {
        let one = SurgeryComplex::trivial();
        let right = connected_sum_surgery(s1, &one)?;
        let right_map = permutation(&right.complex, &s1.complex, |j| j)?;
        let left = connected_sum_surgery(&one, s1)?;
        let left_map = permutation(&left.complex, &s1.complex, |j| j)?;

        let s12_3 = connected_sum_surgery(&connected_sum_surgery(s1, s2)?, s3)?;
        let s1_23 = connected_sum_surgery(s1, &connected_sum_surgery(s2, s3)?)?;
        // ((p|q)|r) sits at (p*n2 + q)*n3 + r and (p|(q|r)) at p*n2*n3 + q*n3 + r,
        // so the associator keeps indices.
        let assoc = permutation(&s12_3.complex, &s1_23.complex, |j| j)?;
        Ok(SumIsomorphisms {
            right_unit: (right, s1.clone(), right_map),
            left_unit: (left, s1.clone(), left_map),
            associator: (s12_3, s1_23, assoc),
        })
    }

    /// Checks all three isomorphisms.
    pub fn verify(&self) -> Result<bool> {
        for (s, t, f) in [&self.right_unit, &self.left_unit, &self.associator] {
            if !is_equivariant_isomorphism(s, t, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The coevaluation cycle `Σ g* | g` in `S^∨ ⊗ S`, returned with that
/// connected sum.
pub fn coevaluation(s: &SurgeryComplex) -> Result<(SurgeryComplex, Chain)> {
    let dual = dual_surgery(s)?;
    let sum = connected_sum_surgery(&dual, s)?;
    let n = s.complex.len();
    let chain: Chain = (0..n).map(|i| (tensor_index(n, i, i), Poly::one(Ring::OneVariable))).collect();
    if !sum.complex.apply_differential(&chain).is_empty() {
        return Err(Error::Internal("coevaluation is not a cycle".into()));
    }
    Ok((sum, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::Homology;

    #[test]
    fn trivial_sum_is_trivial() {
        let t = SurgeryComplex::trivial();
        let s = connected_sum_surgery(&t, &t).unwrap();
        assert_eq!(s.complex.len(), 1);
        assert_eq!(s.complex.id(0), "1|1");
        let iso = SumIsomorphisms::build(&t, &t, &t).unwrap();
        assert!(iso.verify().unwrap());
    }

    #[test]
    fn coevaluation_of_trivial() {
        let (sum, chain) = coevaluation(&SurgeryComplex::trivial()).unwrap();
        let h = Homology::compute(&sum.complex).unwrap();
        let class = h.class_of(&chain, 0).unwrap();
        assert!(h.is_nontorsion(&class));
    }
}
