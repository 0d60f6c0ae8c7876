//! Surgery-level complexes over F2[U]: large-surgery extraction, homology
//! with induced actions, the invariant-class obstruction, local maps,
//! connected sums and the cobordism arithmetic.

pub mod a0;
pub mod cobordism;
pub mod homology;
pub mod invariant;
pub mod local;
pub mod model;
pub mod sum;

use std::sync::Arc;

use num_rational::Rational64;

use crate::algebra::Ring;
use crate::complex::{same_complex, validate_complex, Bigrading, Complex, GradedMap, MapMode};
use crate::error::{Error, Result};

pub use a0::extract_a0;
pub use cobordism::{cobordism_shift, intersection_form_w1n, CobordismData, CobordismShift};
pub use homology::{homology_fu, Class, Homology, HomologyDecomposition, HomologyGenerator};
pub use invariant::{
    induced_action_table, invariant_subspace, invariant_subspace_with, obstruct_decomposition,
    obstruct_equivariant_ball, obstruct_with, ActionRow, InvariantVector, ObstructionStatus, ObstructionVerdict,
    Symmetries,
};
pub use local::{find_local_map_to_trivial, verify_local, LocalReport};
pub use model::{standard_model, StandardModel};
pub use sum::{
    coevaluation, connected_sum_surgery, dual_surgery, dual_surgery_map, is_equivariant_isomorphism, SumIsomorphisms,
};

/// A complex over F2[U] with grading-preserving ι and τ.
#[derive(Debug, Clone)]
pub struct SurgeryComplex {
    pub complex: Arc<Complex>,
    pub iota: GradedMap,
    pub tau: GradedMap,
}

impl SurgeryComplex {
    pub fn new(complex: Arc<Complex>, iota: GradedMap, tau: GradedMap) -> Result<Self> {
        if complex.ring() != Ring::OneVariable {
            return Err(Error::RingMismatch(complex.ring(), Ring::OneVariable));
        }
        let mut maps = Vec::with_capacity(2);
        for (name, f) in [("ι", iota), ("τ", tau)] {
            if !same_complex(&complex, f.source()) || !same_complex(&complex, f.target()) {
                return Err(Error::Incompatible(format!("{name} is not an endomorphism of the complex")));
            }
            if f.degree() != Bigrading::ZERO {
                return Err(Error::Structure(format!("{name} must preserve gradings")));
            }
            maps.push(f.with_mode(MapMode::Linear).rebase(&complex, &complex)?);
        }
        let tau = maps.pop().expect("two maps");
        let iota = maps.pop().expect("two maps");
        Ok(SurgeryComplex { complex, iota, tau })
    }

    /// One generator `1` in grading zero, ι = τ = id.
    pub fn trivial() -> Self {
        let c = Arc::new(Complex::trivial(Ring::OneVariable, "1"));
        let id = GradedMap::identity(&c);
        SurgeryComplex { complex: c, iota: id.clone(), tau: id }
    }

    pub fn shift(&self) -> Rational64 {
        self.complex.shift()
    }

    /// Validation of the complex plus the chain-map and grading conditions
    /// on ι and τ.
    pub fn check(&self) -> Result<()> {
        validate_complex(&self.complex).into_result()?;
        for (name, f) in [("ι", &self.iota), ("τ", &self.tau)] {
            if !f.is_homogeneous() {
                return Err(Error::Structure(format!("{name} does not preserve gradings")));
            }
            if !f.is_chain_map() {
                return Err(Error::Structure(format!("{name} is not a chain map")));
            }
        }
        Ok(())
    }
}
