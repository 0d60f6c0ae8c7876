use std::collections::BTreeMap;

use super::grading::Bigrading;
use super::map::{same_complex, GradedMap, MapMode};
use crate::algebra::{f2_solve, F2Matrix, F2Vec, Monomial, MonomialMatrix};
use crate::error::{Error, Result};

/// Searches for `H` with `f + g = ∂H + H∂`.
///
/// Only homogeneous `H` of degree `deg f + (1, 1)` and of the same mode as
/// `f + g` are considered. This loses nothing: any module map `H` splits as
/// a finite sum of homogeneous pieces `H_e`, one per degree `e`. Since `∂` is
/// homogeneous of degree (-1, -1), `∂H_e + H_e∂` is exactly the degree
/// `e - (1, 1)` component of `∂H + H∂`. Comparing components of degree
/// `deg f` on both sides of `f + g = ∂H + H∂` shows that the single piece
/// `H_{deg f + (1,1)}` is already a homotopy. The same argument applies to
/// skew maps, whose homogeneous pieces are taken with swapped source gradings.
///
/// By grading rigidity each entry of a homogeneous `H` is either forced to
/// one monomial or zero, so the unknowns are F2 bits and the search is a
/// single linear system. The returned homotopy is re-verified exactly.
pub fn homotopic(f: &GradedMap, g: &GradedMap) -> Result<Option<GradedMap>> {
    if !same_complex(f.source(), g.source()) || !same_complex(f.target(), g.target()) {
        return Err(Error::Incompatible("maps have different source or target".into()));
    }
    if f.mode() != g.mode() || f.degree() != g.degree() {
        return Err(Error::Incompatible("maps differ in mode or degree".into()));
    }
    let diff = f.add(g)?;
    null_homotopy(&diff)
}

/// Searches for `H` with `D = ∂H + H∂`, under the same ansatz as [`homotopic`].
pub fn null_homotopy(d: &GradedMap) -> Result<Option<GradedMap>> {
    let source = d.source().clone();
    let target = d.target().clone();
    let ring = source.ring();
    let mode = d.mode();
    let h_degree = d.degree() + Bigrading::HOMOTOPY_STEP;

    // One unknown per admissible entry of H.
    let mut unknowns: Vec<(usize, usize, Monomial)> = Vec::new();
    let probe = GradedMap::zero(source.clone(), target.clone(), mode, h_degree)?;
    for s in 0..source.len() {
        for t in 0..target.len() {
            if let Some(m) = probe.forced_entry(t, s) {
                unknowns.push((t, s, m));
            }
        }
    }

    // Equations are indexed by (target, source, monomial) coefficients.
    let mut eq_index: BTreeMap<(usize, usize, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(unknowns.len());
    let swap = mode == MapMode::Skew;
    for &(t, s, m) in &unknowns {
        let mut col: BTreeMap<usize, bool> = BTreeMap::new();
        let mut hit = |key: (usize, usize, Monomial), eq_index: &mut BTreeMap<_, usize>| {
            let next = eq_index.len();
            let row = *eq_index.entry(key).or_insert(next);
            let bit = col.entry(row).or_insert(false);
            *bit = !*bit;
        };
        // ∂ ∘ H: the unknown contributes ∂_{t', t} · m at (t', s).
        for (t2, p) in target.boundary(t) {
            for q in p.terms() {
                hit((*t2, s, q.mul(m)), &mut eq_index);
            }
        }
        // H ∘ ∂: for each source generator r with ∂r ∋ c·s, the unknown
        // contributes m · σ(c) at (t, r).
        for r in 0..source.len() {
            if let Some(c) = source.differential().get(s, r) {
                let c = if swap { c.swap() } else { c.clone() };
                for q in c.terms() {
                    hit((t, r, q.mul(m)), &mut eq_index);
                }
            }
        }
        columns.push(col.into_iter().filter(|(_, b)| *b).map(|(r, _)| r).collect());
    }
    let mut rhs_terms = Vec::new();
    for (t, s, p) in d.entries().entries() {
        for q in p.terms() {
            let next = eq_index.len();
            let row = *eq_index.entry((t, s, q)).or_insert(next);
            rhs_terms.push(row);
        }
    }

    let nrows = eq_index.len();
    let mut a = F2Matrix::zeros(nrows, unknowns.len());
    for (j, col) in columns.iter().enumerate() {
        for &r in col {
            a.set(r, j, true);
        }
    }
    let mut b = F2Vec::zeros(nrows);
    for r in rhs_terms {
        b.flip(r);
    }
    let Some(x) = f2_solve(&a, &b) else {
        return Ok(None);
    };

    let mut entries = MonomialMatrix::zeros(ring, target.len(), source.len());
    for j in x.ones() {
        let (t, s, m) = unknowns[j];
        entries.add_monomial(t, s, m);
    }
    let h = GradedMap::new(source, target, mode, h_degree, entries)?;
    if &h.commutator_with_differential()? != d {
        return Err(Error::Internal("homotopy failed re-verification".into()));
    }
    Ok(Some(h))
}
