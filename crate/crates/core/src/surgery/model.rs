use std::sync::Arc;

use super::homology::{HomologyDecomposition, HomologyGenerator};
use super::SurgeryComplex;
use crate::algebra::{F2Matrix, Monomial, MonomialMatrix, Ring};
use crate::complex::{homotopic, Bigrading, Chain, Complex, ComplexBuilder, GradedMap, MapMode};
use crate::error::{Error, Result};

/// The split complex realizing a homology decomposition: one cycle per
/// homology generator and, for each torsion generator `g` of order `k`, a
/// partner `p` with `∂p = U^k g`.
#[derive(Debug, Clone)]
pub struct StandardModel {
    pub surgery: SurgeryComplex,
    /// Model generator name and the homology generator it stands for; a
    /// partner is labelled with its generator's name prefixed by `∂⁻¹`.
    pub labels: Vec<(String, String)>,
    /// Chain map from the model into the original complex.
    pub inclusion: GradedMap,
}

/// Letter names: towers are `x`, `x2`, ...; torsion pairs are `(a, b)`,
/// `(c, d)`, ..., `(u, v)` with the cycle second, then `(a1, b1)`, ...
fn letter_names(towers: usize, torsion: usize) -> (Vec<String>, Vec<(String, String)>) {
    let tower_names = (0..towers).map(|i| if i == 0 { "x".to_string() } else { format!("x{}", i + 1) }).collect();
    let letters: Vec<char> = ('a'..='v').collect();
    let pairs = letters.len() / 2;
    let pair_names = (0..torsion)
        .map(|i| {
            let round = i / pairs;
            let k = i % pairs;
            let suffix = if round == 0 { String::new() } else { round.to_string() };
            (format!("{}{suffix}", letters[2 * k]), format!("{}{suffix}", letters[2 * k + 1]))
        })
        .collect();
    (tower_names, pair_names)
}

/// A chain `c` in `complex` of the given grading with `∂c = target`.
fn solve_boundary(complex: &Arc<Complex>, target: &Chain, grading: i64) -> Result<Chain> {
    // Basis of the chain slice in `grading`: U^p h with maslov(h) - 2p = grading.
    let mut basis = Vec::new();
    for h in 0..complex.len() {
        let gap = complex.maslov(h) - grading;
        if gap >= 0 && gap % 2 == 0 {
            basis.push((h, (gap / 2) as u32));
        }
    }
    let mut rows: std::collections::HashMap<(usize, u32), usize> = std::collections::HashMap::new();
    let mut columns = Vec::new();
    for &(h, p) in &basis {
        let mut col = Vec::new();
        for (t, q) in complex.boundary(h) {
            for m in q.terms() {
                let next = rows.len();
                col.push(*rows.entry((*t, m.u + p)).or_insert(next));
            }
        }
        columns.push(col);
    }
    let mut rhs = Vec::new();
    for (t, q) in target {
        for m in q.terms() {
            let next = rows.len();
            rhs.push(*rows.entry((*t, m.u)).or_insert(next));
        }
    }
    let mut a = F2Matrix::zeros(rows.len(), basis.len());
    for (j, col) in columns.iter().enumerate() {
        for &r in col {
            a.flip(r, j);
        }
    }
    let mut b = crate::algebra::F2Vec::zeros(rows.len());
    for r in rhs {
        b.flip(r);
    }
    let x = crate::algebra::f2_solve(&a, &b)
        .ok_or_else(|| Error::Internal("torsion representative is not a boundary".into()))?;
    let mut chain = Chain::new();
    for k in x.ones() {
        let (h, p) = basis[k];
        chain
            .entry(h)
            .or_insert_with(|| crate::algebra::Poly::zero(Ring::OneVariable))
            .add_monomial(Monomial::u_power(p));
    }
    chain.retain(|_, p| !p.is_zero());
    Ok(chain)
}

fn power(p: i64) -> Result<Monomial> {
    u32::try_from(p).map(Monomial::u_power).map_err(|_| Error::Internal("negative U-power in the model".into()))
}

/// Builds the standard model of a decomposition with letter names, its ι
/// and τ read off the induced matrices, and the inclusion into the original
/// complex. The inclusion is checked to intertwine ι and τ up to homotopy.
pub fn standard_model(h: &HomologyDecomposition, original: &SurgeryComplex) -> Result<StandardModel> {
    let hom = &h.homology;
    let gens: &[HomologyGenerator] = hom.generators();
    let towers: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].is_free()).collect();
    let torsion: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_free()).collect();
    let (tower_names, pair_names) = letter_names(towers.len(), torsion.len());

    // Model generator order: towers, then each torsion pair as (partner, cycle).
    let mut cycle_name = vec![String::new(); gens.len()];
    let mut partner_name: Vec<Option<String>> = vec![None; gens.len()];
    let mut b = ComplexBuilder::new(Ring::OneVariable);
    let mut labels = Vec::new();
    for (&i, name) in towers.iter().zip(&tower_names) {
        b.generator(name, Bigrading::maslov(gens[i].grading))?;
        cycle_name[i] = name.clone();
        labels.push((name.clone(), gens[i].name.clone()));
    }
    for (&i, (p, c)) in torsion.iter().zip(&pair_names) {
        let k = gens[i].order.expect("torsion") as i64;
        b.generator(p, Bigrading::maslov(gens[i].grading - 2 * k + 1))?;
        b.generator(c, Bigrading::maslov(gens[i].grading))?;
        b.arrow(p, c, power(k)?)?;
        cycle_name[i] = c.clone();
        partner_name[i] = Some(p.clone());
        labels.push((p.clone(), format!("∂⁻¹({})", gens[i].name)));
        labels.push((c.clone(), gens[i].name.clone()));
    }
    let model = Arc::new(b.shift(original.shift()).build()?);

    let lift = |matrix: &F2Matrix| -> Result<GradedMap> {
        let mut entries = MonomialMatrix::zeros(Ring::OneVariable, model.len(), model.len());
        for j in 0..gens.len() {
            let col = model.require_index(&cycle_name[j])?;
            for i in (0..gens.len()).filter(|&i| matrix.get(i, j)) {
                let row = model.require_index(&cycle_name[i])?;
                let p = (gens[i].grading - gens[j].grading) / 2;
                entries.add_monomial(row, col, power(p)?);
                // partner of j maps to partner of i, scaled to match ∂
                if let (Some(pj), Some(pi)) = (&partner_name[j], &partner_name[i]) {
                    let (kj, ki) = (gens[j].order.unwrap() as i64, gens[i].order.unwrap() as i64);
                    let q = kj + p - ki;
                    if q >= 0 {
                        entries.add_monomial(model.require_index(pi)?, model.require_index(pj)?, power(q)?);
                    }
                }
            }
        }
        GradedMap::new(model.clone(), model.clone(), MapMode::Linear, Bigrading::ZERO, entries)
    };
    let iota = lift(&h.iota_matrix)?;
    let tau = lift(&h.tau_matrix)?;
    let surgery = SurgeryComplex::new(model.clone(), iota, tau)?;
    surgery.check()?;

    // Inclusion: cycles to representatives, partners to chains bounding U^k rep.
    let c = &original.complex;
    let mut entries = MonomialMatrix::zeros(Ring::OneVariable, c.len(), model.len());
    for i in 0..gens.len() {
        let col = model.require_index(&cycle_name[i])?;
        entries.set_column(col, gens[i].representative.clone());
        if let Some(p) = &partner_name[i] {
            let k = gens[i].order.unwrap();
            let target: Chain =
                gens[i].representative.iter().map(|(t, q)| (*t, q.mul_monomial(Monomial::u_power(k)))).collect();
            let chain = solve_boundary(c, &target, gens[i].grading - 2 * k as i64 + 1)?;
            entries.set_column(model.require_index(p)?, chain);
        }
    }
    let inclusion = GradedMap::new(model.clone(), c.clone(), MapMode::Linear, Bigrading::ZERO, entries)?;
    if !inclusion.is_chain_map() {
        return Err(Error::Internal("model inclusion is not a chain map".into()));
    }
    for (name, fm, fo) in [("ι", &surgery.iota, &original.iota), ("τ", &surgery.tau, &original.tau)] {
        if homotopic(&inclusion.compose(fm)?, &fo.compose(&inclusion)?)?.is_none() {
            return Err(Error::Internal(format!("model {name} does not match the original up to homotopy")));
        }
    }
    Ok(StandardModel { surgery, labels, inclusion })
}
