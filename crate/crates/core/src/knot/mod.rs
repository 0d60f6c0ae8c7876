//! Knot-level structure: ι and τ on complexes over F2[U,V], reflection,
//! formal derivatives of the differential, and doubling.

pub mod builtin;
pub mod derivative;
pub mod double;
pub mod equivalence;
pub mod reflect;
pub mod relations;

use std::sync::Arc;

use crate::algebra::Ring;
use crate::complex::{same_complex, Complex, GradedMap, MapMode};
use crate::error::{Error, Result};

pub use builtin::{builtin, BuiltinName};
pub use derivative::{phi, psi, sarkar};
pub use double::{double, double_parts, tau_exch, Convention, DoubleParts};
pub use equivalence::{verify_iota_local, IotaLocalReport};
pub use reflect::{reflect, reflect_map};
pub use relations::{check_iota_relations, RelationsReport, TauRelations};

fn check_endomorphism(c: &Arc<Complex>, f: &GradedMap, name: &str) -> Result<()> {
    if !same_complex(c, f.source()) || !same_complex(c, f.target()) {
        return Err(Error::Incompatible(format!("{name} is not an endomorphism of the complex")));
    }
    Ok(())
}

/// A complex over F2[U,V] with its skew involution ι.
#[derive(Debug, Clone)]
pub struct IotaComplex {
    pub complex: Arc<Complex>,
    pub iota: GradedMap,
}

impl IotaComplex {
    pub fn new(complex: Arc<Complex>, iota: GradedMap) -> Result<Self> {
        if complex.ring() != Ring::TwoVariable {
            return Err(Error::RingMismatch(complex.ring(), Ring::TwoVariable));
        }
        check_endomorphism(&complex, &iota, "ι")?;
        if iota.mode() != MapMode::Skew {
            return Err(Error::Structure("ι must be skew-equivariant".into()));
        }
        let iota = iota.rebase(&complex, &complex)?;
        Ok(IotaComplex { complex, iota })
    }
}

/// A complex with both ι and τ.
#[derive(Debug, Clone)]
pub struct IotaTauComplex {
    pub complex: Arc<Complex>,
    pub iota: GradedMap,
    pub tau: GradedMap,
}

impl IotaTauComplex {
    pub fn new(complex: Arc<Complex>, iota: GradedMap, tau: GradedMap) -> Result<Self> {
        check_endomorphism(&complex, &iota, "ι")?;
        check_endomorphism(&complex, &tau, "τ")?;
        let iota = iota.rebase(&complex, &complex)?;
        let tau = tau.rebase(&complex, &complex)?;
        Ok(IotaTauComplex { complex, iota, tau })
    }
}
