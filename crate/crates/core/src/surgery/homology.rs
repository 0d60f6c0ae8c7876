//! Homology of complexes over F2[U] as a graded F2[U]-module, with explicit
//! cycle representatives and induced actions of chain maps.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use super::SurgeryComplex;
use crate::algebra::{snf_over_fu, Elimination, F2Matrix, F2Vec, Monomial, Poly, Ring, SmithForm, Span};
use crate::complex::{reduce, Chain, Complex, GradedMap, ReductionCertificate};
use crate::error::{Error, Result};

/// Upper bound on candidate cycles examined while choosing sparse
/// representatives; past it the representatives from the Smith form are kept.
const CANONICAL_BUDGET: usize = 60_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGenerator {
    /// `None` for a tower (free summand), `Some(k)` for `F2[U]/U^k`.
    pub order: Option<u32>,
    pub grading: i64,
    /// A cycle in the original complex.
    pub representative: Chain,
    /// The representative rendered with generator names.
    pub name: String,
}

impl HomologyGenerator {
    pub fn is_free(&self) -> bool {
        self.order.is_none()
    }

    /// `U^p` times this generator is nonzero.
    fn supports_power(&self, p: i64) -> bool {
        p >= 0 && self.order.is_none_or(|k| p < k as i64)
    }
}

/// A homology class in one grading, in coordinates: bit `i` is the
/// coefficient of `U^{p_i} g_i` with `p_i = (gr(g_i) - grading) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub grading: i64,
    pub coords: F2Vec,
}

/// The F2 vector space of chains in one grading, with basis `U^p · h`.
#[derive(Debug)]
struct ChainSlice {
    basis: Vec<(usize, u32)>,
    index: HashMap<(usize, u32), usize>,
}

impl ChainSlice {
    fn new(c: &Complex, grading: i64) -> Self {
        let mut basis = Vec::new();
        for h in 0..c.len() {
            let gap = c.maslov(h) - grading;
            if gap >= 0 && gap % 2 == 0 {
                basis.push((h, (gap / 2) as u32));
            }
        }
        let index = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        ChainSlice { basis, index }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn vector(&self, chain: &Chain) -> Result<F2Vec> {
        let mut v = F2Vec::zeros(self.len());
        for (h, p) in chain {
            for m in p.terms() {
                let i = self
                    .index
                    .get(&(*h, m.u))
                    .ok_or_else(|| Error::Precondition("chain is not homogeneous in the requested grading".into()))?;
                v.flip(*i);
            }
        }
        Ok(v)
    }

    fn chain(&self, v: &F2Vec) -> Chain {
        let mut chain = Chain::new();
        for i in v.ones() {
            let (h, p) = self.basis[i];
            chain.entry(h).or_insert_with(|| Poly::zero(Ring::OneVariable)).add_monomial(Monomial::u_power(p));
        }
        chain.retain(|_, p| !p.is_zero());
        chain
    }
}

/// Solves for class coordinates in one grading: columns are the eligible
/// generator representatives followed by a spanning set of boundaries.
#[derive(Debug)]
struct ClassSolver {
    slice: ChainSlice,
    /// Homology generator index of each leading column.
    generators: Vec<usize>,
    elimination: Elimination,
}

/// Homology of a complex over F2[U] with chosen generators.
#[derive(Debug)]
pub struct Homology {
    complex: Arc<Complex>,
    reduction: ReductionCertificate,
    smith: SmithForm,
    generators: Vec<HomologyGenerator>,
    solvers: Mutex<HashMap<i64, Arc<ClassSolver>>>,
}

impl Clone for Homology {
    fn clone(&self) -> Self {
        Homology {
            complex: self.complex.clone(),
            reduction: self.reduction.clone(),
            smith: self.smith.clone(),
            generators: self.generators.clone(),
            solvers: Mutex::new(HashMap::new()),
        }
    }
}

fn power_chain(chain: &Chain, p: u32) -> Chain {
    chain.iter().map(|(i, q)| (*i, q.mul_monomial(Monomial::u_power(p)))).collect()
}

fn mod_u(chain: &Chain, len: usize) -> F2Vec {
    F2Vec::from_indices(len, chain.iter().filter(|(_, p)| p.terms().any(|m| m.is_one())).map(|(i, _)| *i))
}

fn column_chain(m: &crate::algebra::MonomialMatrix, col: usize) -> Chain {
    m.column(col).clone()
}

impl Homology {
    /// Reduces, takes the Smith form of the minimal differential and picks
    /// generators: torsion classes from the Smith row basis, towers by
    /// completing them to a basis of the cycles modulo U. Representatives
    /// are then replaced by sparse cycles where the search budget allows.
    pub fn compute(c: &Arc<Complex>) -> Result<Homology> {
        if c.ring() != Ring::OneVariable {
            return Err(Error::RingMismatch(c.ring(), Ring::OneVariable));
        }
        let (reduction, _) = reduce(c, &[])?;
        let m = reduction.minimal.clone();
        let gradings: Vec<i64> = (0..m.len()).map(|i| m.maslov(i)).collect();
        let smith = snf_over_fu(m.differential(), &gradings, &gradings, -1)?;
        let r = smith.rank();
        let n = m.len();

        let mut raw: Vec<(Option<u32>, i64, Chain)> = Vec::new();
        let mut span = Span::new();
        for i in 0..r {
            let f = column_chain(&smith.row_inverse, i);
            if !span.insert(&mod_u(&f, n)) {
                return Err(Error::Internal("Smith row basis is not independent modulo U".into()));
            }
            raw.push((Some(smith.diagonal[i]), smith.row_gradings[i], f));
        }
        for j in r..n {
            let g = column_chain(&smith.col_transform, j);
            if span.insert(&mod_u(&g, n)) {
                raw.push((None, smith.col_gradings[j], g));
            }
        }
        if raw.len() != n - r {
            return Err(Error::Internal("cycle basis completion has the wrong size".into()));
        }

        let generators = raw
            .into_iter()
            .map(|(order, grading, f)| {
                let representative = reduction.include.apply(&f);
                let name = c.format_chain(&representative);
                HomologyGenerator { order, grading, representative, name }
            })
            .collect();
        let mut h = Homology { complex: c.clone(), reduction, smith, generators, solvers: Mutex::new(HashMap::new()) };
        h.canonicalize()?;
        Ok(h)
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn reduction(&self) -> &ReductionCertificate {
        &self.reduction
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn generators(&self) -> &[HomologyGenerator] {
        &self.generators
    }

    pub fn tower_rank(&self) -> usize {
        self.generators.iter().filter(|g| g.is_free()).count()
    }

    /// `(order, grading)` of each torsion summand.
    pub fn torsion(&self) -> Vec<(u32, i64)> {
        self.generators.iter().filter_map(|g| g.order.map(|k| (k, g.grading))).collect()
    }

    pub fn max_torsion_order(&self) -> u32 {
        self.generators.iter().filter_map(|g| g.order).max().unwrap_or(0)
    }

    fn solver(&self, grading: i64) -> Arc<ClassSolver> {
        let mut cache = self.solvers.lock().expect("solver cache poisoned");
        cache.entry(grading).or_insert_with(|| Arc::new(self.build_solver(grading))).clone()
    }

    fn build_solver(&self, grading: i64) -> ClassSolver {
        let c = &self.complex;
        let slice = ChainSlice::new(c, grading);
        let mut columns: Vec<F2Vec> = Vec::new();
        let mut generators = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let gap = g.grading - grading;
            if gap % 2 == 0 && g.supports_power(gap / 2) {
                let v = slice.vector(&power_chain(&g.representative, (gap / 2) as u32)).expect("homogeneous rep");
                columns.push(v);
                generators.push(i);
            }
        }
        let above = ChainSlice::new(c, grading + 1);
        for &(h, p) in &above.basis {
            let bd = power_chain(c.boundary(h), p);
            columns.push(slice.vector(&bd).expect("homogeneous differential"));
        }
        let mut a = F2Matrix::zeros(slice.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for i in col.ones() {
                a.set(i, j, true);
            }
        }
        ClassSolver { slice, generators, elimination: Elimination::new(&a) }
    }

    /// Coordinates of the class of a homogeneous cycle.
    pub fn class_of(&self, chain: &Chain, grading: i64) -> Result<Class> {
        let solver = self.solver(grading);
        let v = solver.slice.vector(chain)?;
        let x = solver.elimination.solve(&v).ok_or_else(|| Error::Precondition("chain is not a cycle".into()))?;
        let mut coords = F2Vec::zeros(self.generators.len());
        for (k, &g) in solver.generators.iter().enumerate() {
            if x.get(k) {
                coords.set(g, true);
            }
        }
        Ok(Class { grading, coords })
    }

    /// The class of a homogeneous chain, or `None` if it is not a cycle.
    pub fn try_class_of(&self, chain: &Chain, grading: i64) -> Result<Option<Class>> {
        if !self.complex.apply_differential(chain).is_empty() {
            return Ok(None);
        }
        self.class_of(chain, grading).map(Some)
    }

    pub fn is_boundary(&self, chain: &Chain, grading: i64) -> Result<bool> {
        Ok(self.try_class_of(chain, grading)?.is_some_and(|c| c.coords.is_zero()))
    }

    /// Chain representative of a class.
    pub fn representative(&self, class: &Class) -> Chain {
        let mut out = Chain::new();
        for i in class.coords.ones() {
            let g = &self.generators[i];
            let p = ((g.grading - class.grading) / 2) as u32;
            crate::complex::chain_add_scaled(
                &mut out,
                &g.representative,
                &Poly::monomial(Ring::OneVariable, Monomial::u_power(p)).unwrap(),
            );
        }
        out
    }

    /// `U · class`.
    pub fn mul_u(&self, class: &Class) -> Class {
        let grading = class.grading - 2;
        let mut coords = F2Vec::zeros(self.generators.len());
        for i in class.coords.ones() {
            let g = &self.generators[i];
            if g.supports_power((g.grading - grading) / 2) {
                coords.set(i, true);
            }
        }
        Class { grading, coords }
    }

    /// A class is U-nontorsion iff `U^{k_max}` times it is nonzero, `k_max`
    /// the largest torsion order.
    pub fn is_nontorsion(&self, class: &Class) -> bool {
        let mut c = class.clone();
        for _ in 0..self.max_torsion_order() {
            c = self.mul_u(&c);
        }
        !c.coords.is_zero()
    }

    /// Smallest `k` with `U^k · class = 0`; `None` if nontorsion.
    pub fn torsion_order(&self, class: &Class) -> Option<u32> {
        if self.is_nontorsion(class) {
            return None;
        }
        let mut c = class.clone();
        let mut k = 0;
        while !c.coords.is_zero() {
            c = self.mul_u(&c);
            k += 1;
        }
        Some(k)
    }

    /// Matrix of a grading-preserving chain endomorphism on the generators:
    /// entry `(i, j)` is the coefficient of `U^p g_i` in `f(g_j)`.
    pub fn induced_matrix(&self, f: &GradedMap) -> Result<F2Matrix> {
        self.induced_matrix_into(f, self)
    }

    /// Matrix of a grading-preserving chain map into the complex of `target`.
    pub fn induced_matrix_into(&self, f: &GradedMap, target: &Homology) -> Result<F2Matrix> {
        if f.degree().u != 0 {
            return Err(Error::Precondition("induced matrices need grading-preserving maps".into()));
        }
        let mut m = F2Matrix::zeros(target.generators.len(), self.generators.len());
        for (j, g) in self.generators.iter().enumerate() {
            let image = f.apply(&g.representative);
            let class = target.class_of(&image, g.grading)?;
            for i in class.coords.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Indices of the generators living in `grading`.
    pub fn generators_in(&self, grading: i64) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].grading == grading).collect()
    }

    /// Applies an induced matrix to a class, multiplying through by the
    /// appropriate powers of U.
    pub fn act(&self, matrix: &F2Matrix, class: &Class) -> Class {
        let mut coords = F2Vec::zeros(self.generators.len());
        for j in class.coords.ones() {
            let mut image = Class { grading: self.generators[j].grading, coords: matrix.column(j) };
            while image.grading > class.grading {
                image = self.mul_u(&image);
            }
            coords.xor_assign(&image.coords);
        }
        Class { grading: class.grading, coords }
    }

    /// Basis of the F2 space of classes in one grading: the generators `i`
    /// with `U^{p_i} g_i` nonzero there.
    pub fn slice_basis(&self, grading: i64) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| {
                let gap = self.generators[i].grading - grading;
                gap % 2 == 0 && self.generators[i].supports_power(gap / 2)
            })
            .collect()
    }

    /// `[g]`, `U*[g]`, `U^2*[g]` terms joined by `+`; `0` for the zero class.
    pub fn format_class(&self, class: &Class) -> String {
        let terms: Vec<String> = class
            .coords
            .ones()
            .map(|i| {
                let g = &self.generators[i];
                let p = (g.grading - class.grading) / 2;
                match p {
                    0 => format!("[{}]", g.name),
                    1 => format!("U*[{}]", g.name),
                    _ => format!("U^{p}*[{}]", g.name),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// The class of generator `i` in its own grading.
    pub fn generator_class(&self, i: usize) -> Class {
        Class { grading: self.generators[i].grading, coords: F2Vec::from_indices(self.generators.len(), [i]) }
    }

    fn clear_cache(&self) {
        self.solvers.lock().expect("solver cache poisoned").clear();
    }

    /// Replaces representatives, group by group, with the sparsest cycles
    /// that still give a valid decomposition, then sorts the generators.
    ///
    /// Gradings are processed from the top down. Within a grading the
    /// generators are grouped by order. A group may be changed by adding
    /// other generators' multiples `U^p h` whose order does not exceed the
    /// group's (anything, for a free group); new representatives are the
    /// first cycles in order of weight whose classes lie in the group's span
    /// plus those additions and are independent modulo them.
    fn canonicalize(&mut self) -> Result<()> {
        let mut budget = CANONICAL_BUDGET;
        let gradings: BTreeSet<i64> = self.generators.iter().map(|g| g.grading).collect();
        for &grading in gradings.iter().rev() {
            let mut keys: Vec<Option<u32>> =
                self.generators_in(grading).iter().map(|&i| self.generators[i].order).collect();
            keys.sort_by_key(|k| (k.is_none(), *k));
            keys.dedup();
            for key in keys {
                let group: Vec<usize> =
                    self.generators_in(grading).into_iter().filter(|&i| self.generators[i].order == key).collect();
                self.canonicalize_group(grading, key, &group, &mut budget)?;
                self.clear_cache();
            }
        }
        let c = self.complex.clone();
        for g in &mut self.generators {
            g.name = c.format_chain(&g.representative);
        }
        self.generators.sort_by(|a, b| {
            let pivot = |g: &HomologyGenerator| g.representative.keys().next_back().copied();
            b.grading
                .cmp(&a.grading)
                .then(a.order.is_some().cmp(&b.order.is_some()))
                .then(a.order.cmp(&b.order))
                .then(pivot(a).cmp(&pivot(b)))
                .then(a.name.cmp(&b.name))
        });
        self.clear_cache();
        Ok(())
    }

    fn canonicalize_group(
        &mut self,
        grading: i64,
        key: Option<u32>,
        group: &[usize],
        budget: &mut usize,
    ) -> Result<()> {
        let n = self.generators.len();
        let in_group: Vec<bool> = (0..n).map(|i| group.contains(&i)).collect();
        // Allowed additions, as class coordinates in this grading.
        let mut allowed = vec![false; n];
        for (i, g) in self.generators.iter().enumerate() {
            let gap = g.grading - grading;
            if in_group[i] || gap % 2 != 0 || !g.supports_power(gap / 2) {
                continue;
            }
            allowed[i] = match (key, g.order) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(k), Some(kh)) => kh as i64 - gap / 2 <= k as i64,
            };
        }
        let mut independent = Span::new();
        for (i, &ok) in allowed.iter().enumerate() {
            if ok {
                independent.insert(&F2Vec::from_indices(n, [i]));
            }
        }
        let admissible = |coords: &F2Vec| coords.ones().all(|i| in_group[i] || allowed[i]);

        let solver = self.solver(grading);
        let slice = &solver.slice;
        let below = ChainSlice::new(&self.complex, grading - 1);
        let boundaries: Vec<F2Vec> = slice
            .basis
            .iter()
            .map(|&(h, p)| below.vector(&power_chain(self.complex.boundary(h), p)).expect("homogeneous differential"))
            .collect();

        let mut accepted: Vec<Chain> = Vec::new();
        let size = slice.len();
        'weights: for weight in 1..=size {
            let mut combo: Vec<usize> = (0..weight).collect();
            loop {
                if *budget == 0 {
                    break 'weights;
                }
                *budget -= 1;
                let mut bd = F2Vec::zeros(below.len());
                for &i in &combo {
                    bd.xor_assign(&boundaries[i]);
                }
                if bd.is_zero() {
                    let v = F2Vec::from_indices(size, combo.iter().copied());
                    let chain = slice.chain(&v);
                    let class = self.class_of(&chain, grading)?;
                    if !class.coords.is_zero() && admissible(&class.coords) && independent.insert(&class.coords) {
                        accepted.push(chain);
                        if accepted.len() == group.len() {
                            break 'weights;
                        }
                    }
                }
                // next combination in lexicographic order
                let mut k = weight;
                while k > 0 && combo[k - 1] == size - weight + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                combo[k - 1] += 1;
                for t in k..weight {
                    combo[t] = combo[t - 1] + 1;
                }
            }
        }
        // Fall back to the existing representatives for whatever is missing.
        for &g in group {
            if accepted.len() == group.len() {
                break;
            }
            if independent.insert(&F2Vec::from_indices(n, [g])) {
                accepted.push(self.generators[g].representative.clone());
            }
        }
        if accepted.len() != group.len() {
            return Err(Error::Internal("could not rebuild a homology basis".into()));
        }
        for (&g, rep) in group.iter().zip(accepted) {
            self.generators[g].representative = rep;
        }
        Ok(())
    }
}

/// Homology of a surgery complex with the induced ι and τ matrices.
#[derive(Debug, Clone)]
pub struct HomologyDecomposition {
    pub homology: Homology,
    pub iota_matrix: F2Matrix,
    pub tau_matrix: F2Matrix,
}

impl HomologyDecomposition {
    pub fn tower_rank(&self) -> usize {
        self.homology.tower_rank()
    }

    pub fn torsion(&self) -> Vec<(u32, i64)> {
        self.homology.torsion()
    }

    pub fn generators(&self) -> &[HomologyGenerator] {
        self.homology.generators()
    }
}

pub fn homology_fu(s: &SurgeryComplex) -> Result<HomologyDecomposition> {
    let homology = Homology::compute(&s.complex)?;
    let iota_matrix = homology.induced_matrix(&s.iota)?;
    let tau_matrix = homology.induced_matrix(&s.tau)?;
    Ok(HomologyDecomposition { homology, iota_matrix, tau_matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Bigrading, ComplexBuilder};

    #[test]
    fn trivial_complex_homology() {
        let h = homology_fu(&SurgeryComplex::trivial()).unwrap();
        assert_eq!(h.tower_rank(), 1);
        assert!(h.torsion().is_empty());
        assert_eq!(h.generators()[0].name, "1");
    }

    #[test]
    fn torsion_and_tower() {
        // a -> U^2 b, plus a free generator x
        let mut b = ComplexBuilder::new(Ring::OneVariable);
        b.generator("x", Bigrading::maslov(0)).unwrap();
        b.generator("a", Bigrading::maslov(-1)).unwrap();
        b.generator("b", Bigrading::maslov(2)).unwrap();
        b.arrow("a", "b", Monomial::u_power(2)).unwrap();
        let c = Arc::new(b.build().unwrap());
        let h = Homology::compute(&c).unwrap();
        assert_eq!(h.tower_rank(), 1);
        assert_eq!(h.torsion(), vec![(2, 2)]);
        let bclass = h.class_of(&h.generators()[0].representative, 2).unwrap();
        assert!(!h.is_nontorsion(&bclass));
        assert_eq!(h.torsion_order(&bclass), Some(2));
        let x = h.generators().iter().position(|g| g.name == "x").unwrap();
        let xclass = h.class_of(&h.generators()[x].representative, 0).unwrap();
        assert!(h.is_nontorsion(&xclass));
    }
}
