use super::IotaComplex;
use crate::algebra::{f2_kernel, F2Matrix, MonomialMatrix, Span};
use crate::complex::{homotopic, Bigrading, GradedMap, MapMode};
use crate::error::{Error, Result};

/// Conditions for `f : C1 → C2` to be an ι-local map of knot complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaLocalReport {
    pub chain_map: bool,
    /// Linear, degree zero and homogeneous.
    pub grading_preserving: bool,
    /// `f ι1 ≃ ι2 f`.
    pub iota_homotopy: bool,
    /// Isomorphism on homology with `U = V = 1`, where both sides have rank one.
    pub localized_iso: bool,
}

impl IotaLocalReport {
    pub fn conditions(&self) -> [bool; 4] {
        [self.chain_map, self.grading_preserving, self.iota_homotopy, self.localized_iso]
    }

    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|&b| b)
    }
}

/// The matrix with every monomial replaced by 1.
fn at_one(m: &MonomialMatrix) -> F2Matrix {
    let mut out = F2Matrix::zeros(m.nrows(), m.ncols());
    for (r, c, p) in m.entries() {
        if p.len() % 2 == 1 {
            out.set(r, c, true);
        }
    }
    out
}

/// A cycle generating the rank-one homology of `d` (with `d² = 0`), and
/// the span of the boundaries; `None` if the homology is not rank one.
fn localized_generator(d: &F2Matrix) -> Option<(crate::algebra::F2Vec, Span)> {
    let mut boundaries = Span::new();
    for c in 0..d.ncols() {
        boundaries.insert(&d.column(c));
    }
    let cycles = f2_kernel(d);
    if cycles.len() != boundaries.dim() + 1 {
        return None;
    }
    let z = cycles.into_iter().find(|z| !boundaries.contains(z))?;
    Some((z, boundaries))
}

pub fn verify_iota_local(source: &IotaComplex, target: &IotaComplex, f: &GradedMap) -> Result<IotaLocalReport> {
    if f.source().len() != source.complex.len() || f.target().len() != target.complex.len() {
        return Err(Error::Incompatible("map does not match the ι-complexes".into()));
    }
    let f = f.rebase(&source.complex, &target.complex)?;
    let chain_map = f.is_chain_map();
    let grading_preserving = f.mode() == MapMode::Linear && f.degree() == Bigrading::ZERO && f.is_homogeneous();
    let iota_homotopy = chain_map && homotopic(&f.compose(&source.iota)?, &target.iota.compose(&f)?)?.is_some();
    let localized_iso = match (
        localized_generator(&at_one(source.complex.differential())),
        localized_generator(&at_one(target.complex.differential())),
    ) {
        (Some((z, _)), Some((_, boundaries))) => chain_map && !boundaries.contains(&at_one(f.entries()).mul_vec(&z)),
        _ => false,
    };
    Ok(IotaLocalReport { chain_map, grading_preserving, iota_homotopy, localized_iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::builtin::{builtin, BuiltinName};

    #[test]
    fn identity_is_local() {
        let k = builtin(BuiltinName::Fig8).unwrap();
        let r = verify_iota_local(&k, &k, &GradedMap::identity(&k.complex)).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn zero_map_is_not_local() {
        let k = builtin(BuiltinName::Unknot).unwrap();
        let zero = GradedMap::zero(k.complex.clone(), k.complex.clone(), MapMode::Linear, Bigrading::ZERO).unwrap();
        let r = verify_iota_local(&k, &k, &zero).unwrap();
        assert_eq!(r.conditions(), [true, true, true, false]);
    }
}
