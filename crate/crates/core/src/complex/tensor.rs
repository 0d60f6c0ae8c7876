use std::sync::Arc;

use super::complex::{Complex, Generator};
use super::map::GradedMap;
use crate::algebra::MonomialMatrix;
use crate::error::{Error, Result};

/// Wraps an id in parentheses when it is itself a tensor or dual name, so
/// that `p|q` stays unambiguous.
pub fn tensor_component(id: &str) -> String {
    if id.contains('|') {
        format!("({id})")
    } else {
        id.to_string()
    }
}

pub fn tensor_id(p: &str, q: &str) -> String {
    format!("{}|{}", tensor_component(p), tensor_component(q))
}

/// Index of `p|q` in the tensor product; the left factor varies slowest.
pub fn tensor_index(right_len: usize, p: usize, q: usize) -> usize {
    p * right_len + q
}

/// `C1 ⊗ C2` over the common ring with `∂(p|q) = ∂p|q + p|∂q`.
pub fn tensor_complex(c1: &Complex, c2: &Complex) -> Result<Complex> {
    if c1.ring() != c2.ring() {
        return Err(Error::RingMismatch(c1.ring(), c2.ring()));
    }
    let (n1, n2) = (c1.len(), c2.len());
    let mut generators = Vec::with_capacity(n1 * n2);
    for p in c1.generators() {
        for q in c2.generators() {
            generators.push(Generator { id: tensor_id(&p.id, &q.id), grading: p.grading + q.grading });
        }
    }
    let mut d = MonomialMatrix::zeros(c1.ring(), n1 * n2, n1 * n2);
    for p in 0..n1 {
        for q in 0..n2 {
            let col = tensor_index(n2, p, q);
            for (k, coef) in c1.boundary(p) {
                d.add_entry(tensor_index(n2, *k, q), col, coef);
            }
            for (l, coef) in c2.boundary(q) {
                d.add_entry(tensor_index(n2, p, *l), col, coef);
            }
        }
    }
    Complex::new(c1.ring(), generators, d, c1.shift() + c2.shift())
}

/// `f ⊗ g : S1 ⊗ S2 → T1 ⊗ T2` between the given tensor complexes, which
/// must be the tensor products of the factors' sources and targets.
pub fn tensor_maps_between(
    f: &GradedMap,
    g: &GradedMap,
    source: &Arc<Complex>,
    target: &Arc<Complex>,
) -> Result<GradedMap> {
    if f.mode() != g.mode() {
        return Err(Error::Incompatible(format!("cannot tensor a {} map with a {} map", f.mode(), g.mode())));
    }
    let (s2, t2) = (g.source().len(), g.target().len());
    if source.len() != f.source().len() * s2 || target.len() != f.target().len() * t2 {
        return Err(Error::Incompatible("tensor complexes do not match the factors".into()));
    }
    let mut entries = MonomialMatrix::zeros(source.ring(), target.len(), source.len());
    for p in 0..f.source().len() {
        for q in 0..s2 {
            let col = tensor_index(s2, p, q);
            for (k, a) in f.image(p) {
                for (l, b) in g.image(q) {
                    entries.add_entry(tensor_index(t2, *k, *l), col, &a.mul(b)?);
                }
            }
        }
    }
    GradedMap::new(source.clone(), target.clone(), f.mode(), f.degree() + g.degree(), entries)
}

/// `f ⊗ g`, building the source and target tensor complexes.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    let source = Arc::new(tensor_complex(f.source(), g.source())?);
    let target = if f.is_endomorphism() && g.is_endomorphism() {
        source.clone()
    } else {
        Arc::new(tensor_complex(f.target(), g.target())?)
    };
    tensor_maps_between(f, g, &source, &target)
}
