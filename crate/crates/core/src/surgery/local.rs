use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;

use super::homology::Homology;
use super::SurgeryComplex;
use crate::algebra::{Elimination, F2Matrix, F2Vec, Monomial, MonomialMatrix, Ring};
use crate::complex::{homotopic, Bigrading, Complex, GradedMap, MapMode};
use crate::error::{Error, Result};

/// Most kernel combinations tried by the local-map search.
const SEARCH_LIMIT: u64 = 1 << 14;

/// The four locality conditions for a map between surgery complexes.
#[derive(Debug, Clone)]
pub struct LocalReport {
    /// Absolute grading shift of the map.
    pub shift: Rational64,
    pub expected_shift: Rational64,
    /// Condition (1): the shift equals the expected one.
    pub shift_ok: bool,
    /// Condition (2): the map is an isomorphism on the towers.
    pub tower_iso: bool,
    /// Condition (3): a homotopy `f ι ≃ ι f`, if one exists.
    pub iota_homotopy: Option<GradedMap>,
    /// Condition (4): a homotopy `f τ ≃ τ f`, if one exists.
    pub tau_homotopy: Option<GradedMap>,
}

impl LocalReport {
    pub fn iota_commutes(&self) -> bool {
        self.iota_homotopy.is_some()
    }

    pub fn tau_commutes(&self) -> bool {
        self.tau_homotopy.is_some()
    }

    pub fn conditions(&self) -> [bool; 4] {
        [self.shift_ok, self.tower_iso, self.iota_commutes(), self.tau_commutes()]
    }

    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|c| *c)
    }
}

fn as_linear(f: &GradedMap) -> GradedMap {
    if f.source().ring() == Ring::OneVariable {
        f.with_mode(MapMode::Linear)
    } else {
        f.clone()
    }
}

/// F2 determinant of the tower block of `f`: entry `(i, j)` is the
/// coefficient of target tower `i` in the image of source tower `j`.
fn tower_block_invertible(f: &GradedMap, source: &Homology, target: &Homology) -> Result<bool> {
    let s_towers: Vec<usize> = (0..source.generators().len()).filter(|&i| source.generators()[i].is_free()).collect();
    let t_towers: Vec<usize> = (0..target.generators().len()).filter(|&i| target.generators()[i].is_free()).collect();
    if s_towers.len() != t_towers.len() {
        return Ok(false);
    }
    let mut block = F2Matrix::zeros(t_towers.len(), s_towers.len());
    for (col, &j) in s_towers.iter().enumerate() {
        let g = &source.generators()[j];
        let image = f.apply(&g.representative);
        let class = target.class_of(&image, g.grading + f.degree().u)?;
        for (row, &i) in t_towers.iter().enumerate() {
            block.set(row, col, class.coords.get(i));
        }
    }
    Ok(block.rank() == t_towers.len())
}

fn verify_with(
    source: &SurgeryComplex,
    target: &SurgeryComplex,
    f: &GradedMap,
    expected_shift: Rational64,
    source_h: &Homology,
    target_h: &Homology,
) -> Result<LocalReport> {
    let f = as_linear(f).rebase(&source.complex, &target.complex)?;
    if !f.is_chain_map() {
        return Err(Error::NotChainMap);
    }
    let shift = Rational64::from_integer(f.degree().u) + target.shift() - source.shift();
    let tower_iso = tower_block_invertible(&f, source_h, target_h)?;
    let iota_homotopy = homotopic(&f.compose(&source.iota)?, &target.iota.compose(&f)?)?;
    let tau_homotopy = homotopic(&f.compose(&source.tau)?, &target.tau.compose(&f)?)?;
    Ok(LocalReport { shift, expected_shift, shift_ok: shift == expected_shift, tower_iso, iota_homotopy, tau_homotopy })
}

/// Checks that `f : source → target` is a local map with the given shift:
/// correct grading shift, an isomorphism after inverting U (read off the
/// tower coordinates), and homotopy-commutation with ι and with τ.
pub fn verify_local(
    source: &SurgeryComplex,
    target: &SurgeryComplex,
    f: &GradedMap,
    expected_shift: Rational64,
) -> Result<LocalReport> {
    let source_h = Homology::compute(&source.complex)?;
    let target_h = Homology::compute(&target.complex)?;
    verify_with(source, target, f, expected_shift, &source_h, &target_h)
}

/// Unknown entries of a map of the given degree, one per forced monomial.
fn unknowns(source: &Arc<Complex>, target: &Arc<Complex>, degree: Bigrading) -> Result<Vec<(usize, usize, Monomial)>> {
    let probe = GradedMap::zero(source.clone(), target.clone(), MapMode::Linear, degree)?;
    let mut out = Vec::new();
    for s in 0..source.len() {
        for t in 0..target.len() {
            if let Some(m) = probe.forced_entry(t, s) {
                out.push((t, s, m));
            }
        }
    }
    Ok(out)
}

fn single_entry(
    source: &Arc<Complex>,
    target: &Arc<Complex>,
    degree: Bigrading,
    (t, s, m): (usize, usize, Monomial),
) -> Result<GradedMap> {
    let mut entries = MonomialMatrix::zeros(Ring::OneVariable, target.len(), source.len());
    entries.add_monomial(t, s, m);
    GradedMap::new(source.clone(), target.clone(), MapMode::Linear, degree, entries)
}

fn assemble(
    source: &Arc<Complex>,
    target: &Arc<Complex>,
    degree: Bigrading,
    unknowns: &[(usize, usize, Monomial)],
    bits: impl Iterator<Item = usize>,
) -> Result<GradedMap> {
    let mut entries = MonomialMatrix::zeros(Ring::OneVariable, target.len(), source.len());
    for k in bits {
        let (t, s, m) = unknowns[k];
        entries.add_monomial(t, s, m);
    }
    GradedMap::new(source.clone(), target.clone(), MapMode::Linear, degree, entries)
}

/// Searches for a grading-preserving local map from `s` to the trivial
/// complex.
///
/// The unknowns are the bits of `F`, of a homotopy `H_ι` with
/// `Fι + ιF = H_ι ∂` and of `H_τ` likewise. These equations and the chain
/// map condition `F ∂ = 0` are linear; the tower condition is the affine
/// equation "the coefficient of `F(tower)` is 1". Solutions are the
/// particular solution plus kernel combinations, tried in binary counting
/// order; the first one that passes [`verify_local`] is returned.
pub fn find_local_map_to_trivial(s: &SurgeryComplex) -> Result<Option<(GradedMap, LocalReport)>> {
    let trivial = SurgeryComplex::trivial();
    let source_h = Homology::compute(&s.complex)?;
    let target_h = Homology::compute(&trivial.complex)?;
    if source_h.tower_rank() != 1 || s.shift() != trivial.shift() {
        return Ok(None);
    }
    let (src, tgt) = (&s.complex, &trivial.complex);
    let f_unknowns = unknowns(src, tgt, Bigrading::ZERO)?;
    let h_unknowns = unknowns(src, tgt, Bigrading::HOMOTOPY_STEP)?;
    let (nf, nh) = (f_unknowns.len(), h_unknowns.len());
    let total = nf + 2 * nh;

    // Equation rows keyed by (block, target, source, monomial).
    let mut rows: HashMap<(u8, usize, usize, Monomial), usize> = HashMap::new();
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut record = |col: usize, block: u8, map: &GradedMap, rows: &mut HashMap<_, usize>| {
        for (t, src_gen, p) in map.entries().entries() {
            for m in p.terms() {
                let next = rows.len();
                let r = *rows.entry((block, t, src_gen, m)).or_insert(next);
                columns[col].push(r);
            }
        }
    };
    let d_src = src.differential_map();
    for (k, &u) in f_unknowns.iter().enumerate() {
        let e = single_entry(src, tgt, Bigrading::ZERO, u)?;
        record(k, 0, &e.commutator_with_differential()?, &mut rows);
        let iota_part = e.compose(&s.iota)?.add(&trivial.iota.compose(&e)?)?;
        record(k, 1, &iota_part, &mut rows);
        let tau_part = e.compose(&s.tau)?.add(&trivial.tau.compose(&e)?)?;
        record(k, 2, &tau_part, &mut rows);
    }
    for (k, &u) in h_unknowns.iter().enumerate() {
        let e = single_entry(src, tgt, Bigrading::HOMOTOPY_STEP, u)?;
        let part = e.compose(&d_src)?;
        record(nf + k, 1, &part, &mut rows);
        record(nf + nh + k, 2, &part, &mut rows);
    }

    // Tower row: the coefficient of 1 in F(tower representative).
    let tower = source_h.generators().iter().find(|g| g.is_free()).expect("tower rank is 1");
    let tower_row = rows.len();
    let nrows = tower_row + 1;
    let mut a = F2Matrix::zeros(nrows, total);
    for (col, rs) in columns.iter().enumerate() {
        for &r in rs {
            a.flip(r, col);
        }
    }
    for (k, &(_, s_gen, m)) in f_unknowns.iter().enumerate() {
        if let Some(p) = tower.representative.get(&s_gen) {
            for q in p.terms() {
                if q.mul(m) == Monomial::u_power((-tower.grading / 2).max(0) as u32) && tower.grading <= 0 {
                    a.flip(tower_row, k);
                }
            }
        }
    }
    let mut b = F2Vec::zeros(nrows);
    b.set(tower_row, true);

    let elim = Elimination::new(&a);
    let Some(x0) = elim.solve(&b) else {
        return Ok(None);
    };
    let kernel = elim.kernel();
    let limit = if kernel.len() >= 64 { SEARCH_LIMIT } else { SEARCH_LIMIT.min(1u64 << kernel.len()) };
    for combo in 0..limit {
        let mut x = x0.clone();
        for (i, v) in kernel.iter().enumerate() {
            if i < 64 && combo >> i & 1 == 1 {
                x.xor_assign(v);
            }
        }
        let f = assemble(src, tgt, Bigrading::ZERO, &f_unknowns, x.ones().filter(|&k| k < nf))?;
        let report = verify_with(s, &trivial, &f, Rational64::from_integer(0), &source_h, &target_h)?;
        if report.all_pass() {
            return Ok(Some((f, report)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexBuilder;

    #[test]
    fn identity_on_trivial_is_local() {
        let t = SurgeryComplex::trivial();
        let id = GradedMap::identity(&t.complex);
        let r = verify_local(&t, &t, &id, Rational64::from_integer(0)).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn zero_map_fails_tower_condition() {
        let t = SurgeryComplex::trivial();
        let zero = GradedMap::zero(t.complex.clone(), t.complex.clone(), MapMode::Linear, Bigrading::ZERO).unwrap();
        let r = verify_local(&t, &t, &zero, Rational64::from_integer(0)).unwrap();
        assert_eq!(r.conditions(), [true, false, true, true]);
    }

    #[test]
    fn trivial_maps_to_itself() {
        let (f, report) = find_local_map_to_trivial(&SurgeryComplex::trivial()).unwrap().unwrap();
        assert!(report.all_pass());
        assert_eq!(f.describe(), vec![("1".to_string(), "1".to_string())]);
    }

    #[test]
    fn tower_in_grading_two_has_no_local_map() {
        let mut b = ComplexBuilder::new(Ring::OneVariable);
        b.generator("y", Bigrading::maslov(2)).unwrap();
        let c = Arc::new(b.build().unwrap());
        let id = GradedMap::identity(&c);
        let s = SurgeryComplex::new(c, id.clone(), id).unwrap();
        assert!(find_local_map_to_trivial(&s).unwrap().is_none());
    }
}
