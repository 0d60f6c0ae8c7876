use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;

use super::homology::{homology_fu, Class, HomologyDecomposition};
use super::SurgeryComplex;
use crate::algebra::{f2_kernel, F2Matrix, F2Vec};
use crate::error::{Error, Result};

/// One row of the action table: a homology generator and its images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRow {
    pub class: String,
    pub grading: i64,
    /// `None` for a tower generator.
    pub order: Option<u32>,
    pub iota: String,
    pub tau: String,
}

impl ActionRow {
    pub fn is_free(&self) -> bool {
        self.order.is_none()
    }
}

pub fn induced_action_table(h: &HomologyDecomposition) -> Vec<ActionRow> {
    let hom = &h.homology;
    (0..hom.generators().len())
        .map(|i| {
            let g = &hom.generators()[i];
            let class = hom.generator_class(i);
            ActionRow {
                class: format!("[{}]", g.name),
                grading: g.grading,
                order: g.order,
                iota: hom.format_class(&hom.act(&h.iota_matrix, &class)),
                tau: hom.format_class(&hom.act(&h.tau_matrix, &class)),
            }
        })
        .collect()
}

/// Which symmetries a class must be invariant under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Symmetries {
    /// Both ι and τ.
    #[default]
    Both,
    IotaOnly,
    TauOnly,
    /// Only the composite τ∘ι.
    TauIota,
}

impl Symmetries {
    pub const ALL: [Symmetries; 4] = [Symmetries::Both, Symmetries::IotaOnly, Symmetries::TauOnly, Symmetries::TauIota];

    pub fn name(self) -> &'static str {
        match self {
            Symmetries::Both => "iota+tau",
            Symmetries::IotaOnly => "iota",
            Symmetries::TauOnly => "tau",
            Symmetries::TauIota => "tau-iota",
        }
    }
}

impl fmt::Display for Symmetries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symmetries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Symmetries::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown symmetry set `{s}` (expected iota+tau, iota, tau or tau-iota)"))
        })
    }
}

/// A basis vector of an invariant subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVector {
    pub class: Class,
    pub name: String,
    pub nontorsion: bool,
}

fn slice_matrix(h: &HomologyDecomposition, matrix: &F2Matrix, grading: i64, basis: &[usize]) -> F2Matrix {
    let hom = &h.homology;
    let n = hom.generators().len();
    let mut m = F2Matrix::zeros(basis.len(), basis.len());
    for (col, &j) in basis.iter().enumerate() {
        let class = Class { grading, coords: F2Vec::from_indices(n, [j]) };
        let image = hom.act(matrix, &class);
        for (row, &i) in basis.iter().enumerate() {
            if image.coords.get(i) {
                m.set(row, col, true);
            }
        }
    }
    m
}

fn plus_identity(m: &F2Matrix) -> F2Matrix {
    m.add(&F2Matrix::identity(m.nrows()))
}

/// Basis of the classes in `grading` fixed by the chosen symmetries, each
/// flagged by whether it is U-nontorsion.
pub fn invariant_subspace_with(
    h: &HomologyDecomposition,
    grading: i64,
    symmetries: Symmetries,
) -> Vec<InvariantVector> {
    let hom = &h.homology;
    let basis = hom.slice_basis(grading);
    if basis.is_empty() {
        return Vec::new();
    }
    let iota = slice_matrix(h, &h.iota_matrix, grading, &basis);
    let tau = slice_matrix(h, &h.tau_matrix, grading, &basis);
    let blocks = match symmetries {
        Symmetries::Both => vec![plus_identity(&iota), plus_identity(&tau)],
        Symmetries::IotaOnly => vec![plus_identity(&iota)],
        Symmetries::TauOnly => vec![plus_identity(&tau)],
        Symmetries::TauIota => vec![plus_identity(&tau.mul(&iota))],
    };
    let mut stacked = F2Matrix::zeros(0, basis.len());
    for b in blocks {
        for r in 0..b.nrows() {
            stacked.push_row(b.row(r).clone());
        }
    }
    let n = hom.generators().len();
    f2_kernel(&stacked)
        .into_iter()
        .map(|v| {
            let class = Class { grading, coords: F2Vec::from_indices(n, v.ones().map(|k| basis[k])) };
            InvariantVector { name: hom.format_class(&class), nontorsion: hom.is_nontorsion(&class), class }
        })
        .collect()
}

/// Classes in `grading` fixed by both ι and τ.
pub fn invariant_subspace(h: &HomologyDecomposition, grading: i64) -> Vec<InvariantVector> {
    invariant_subspace_with(h, grading, Symmetries::Both)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstructionStatus {
    /// No invariant U-nontorsion class in grading zero exists.
    Obstructed,
    Inconclusive,
}

impl ObstructionStatus {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionStatus::Obstructed => "OBSTRUCTED",
            ObstructionStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for ObstructionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionVerdict {
    pub status: ObstructionStatus,
    pub symmetries: Symmetries,
    pub witness: Vec<InvariantVector>,
    pub narrative: String,
}

fn narrative(status: ObstructionStatus, symmetries: Symmetries, witness: &[InvariantVector]) -> String {
    let span = if witness.is_empty() {
        "the invariant subspace in grading 0 is zero".to_string()
    } else {
        let names: Vec<String> = witness
            .iter()
            .map(|w| format!("{} ({})", w.name, if w.nontorsion { "nontorsion" } else { "torsion" }))
            .collect();
        format!("the invariant subspace in grading 0 is spanned by {}", names.join(", "))
    };
    match status {
        ObstructionStatus::Obstructed => format!(
            "Invariant under {symmetries}: {span}. No U-nontorsion class in grading 0 is invariant, so the \
             manifold bounds no equivariant homology ball."
        ),
        ObstructionStatus::Inconclusive => format!(
            "Invariant under {symmetries}: {span}. A U-nontorsion invariant class exists, which does not \
             decide sliceness."
        ),
    }
}

/// The verdict for an already computed decomposition of a complex with the
/// given grading shift.
pub fn obstruct_decomposition(
    h: &HomologyDecomposition,
    shift: Rational64,
    symmetries: Symmetries,
) -> Result<ObstructionVerdict> {
    if !shift.is_zero() {
        return Err(Error::NotNormalized(shift.to_string()));
    }
    let witness = invariant_subspace_with(h, 0, symmetries);
    let status = if witness.iter().any(|w| w.nontorsion) {
        ObstructionStatus::Inconclusive
    } else {
        ObstructionStatus::Obstructed
    };
    let narrative = narrative(status, symmetries, &witness);
    Ok(ObstructionVerdict { status, symmetries, witness, narrative })
}

pub fn obstruct_with(s: &SurgeryComplex, symmetries: Symmetries) -> Result<ObstructionVerdict> {
    if !s.shift().is_zero() {
        return Err(Error::NotNormalized(s.shift().to_string()));
    }
    obstruct_decomposition(&homology_fu(s)?, s.shift(), symmetries)
}

/// Looks for a grading-zero U-nontorsion class fixed by both ι and τ.
pub fn obstruct_equivariant_ball(s: &SurgeryComplex) -> Result<ObstructionVerdict> {
    obstruct_with(s, Symmetries::Both)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_complex_is_inconclusive() {
        let s = SurgeryComplex::trivial();
        let h = homology_fu(&s).unwrap();
        let inv = invariant_subspace(&h, 0);
        assert_eq!(inv.len(), 1);
        assert!(inv[0].nontorsion);
        assert_eq!(inv[0].name, "[1]");
        let v = obstruct_equivariant_ball(&s).unwrap();
        assert_eq!(v.status, ObstructionStatus::Inconclusive);
    }

    #[test]
    fn shifted_complex_is_rejected() {
        let s = SurgeryComplex::trivial();
        let c = std::sync::Arc::new(s.complex.with_shift(Rational64::new(1, 4)).unwrap());
        let id = crate::complex::GradedMap::identity(&c);
        let shifted = SurgeryComplex::new(c, id.clone(), id).unwrap();
        assert!(matches!(obstruct_equivariant_ball(&shifted), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn symmetry_names_round_trip() {
        for s in Symmetries::ALL {
            assert_eq!(s.name().parse::<Symmetries>().unwrap(), s);
        }
    }
}
