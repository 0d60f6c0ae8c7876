use std::sync::Arc;

use super::derivative::sarkar;
use super::IotaComplex;
use crate::algebra::MonomialMatrix;
use crate::complex::{Bigrading, Complex, Generator, GradedMap, MapMode};
use crate::error::{Error, Result};

/// The reflected complex: gradings swapped and U, V exchanged in `∂`.
/// Generator ids are kept, so `p` in `C` corresponds to `p` in `C^r`.
pub fn reflect_complex(c: &Complex) -> Result<Complex> {
    let generators = c.generators().iter().map(|g| Generator { id: g.id.clone(), grading: g.grading.swap() }).collect();
    Complex::new(c.ring(), generators, c.differential().swap_variables(), c.shift())
}

/// The skew identification `sw : from → to` sending each generator to the
/// generator with the same index.
pub fn switch_map(from: &Arc<Complex>, to: &Arc<Complex>) -> Result<GradedMap> {
    if from.len() != to.len() {
        return Err(Error::Incompatible("switch map between complexes of different size".into()));
    }
    GradedMap::new(
        from.clone(),
        to.clone(),
        MapMode::Skew,
        Bigrading::ZERO,
        MonomialMatrix::identity(from.ring(), from.len()),
    )
}

/// Reflects an ι-complex. Returns `(C^r, ι^r)` with `ι^r = sw⁻¹ ∘ (ς ∘ ι) ∘ sw`
/// and the switch map `sw : C^r → C`.
pub fn reflect(k: &IotaComplex) -> Result<(IotaComplex, GradedMap)> {
    let c = &k.complex;
    let cr = Arc::new(reflect_complex(c)?);
    let sw = switch_map(&cr, c)?;
    let sw_inv = switch_map(c, &cr)?;
    let sarkar_iota = sarkar(c)?.compose(&k.iota)?;
    let iota_r = sw_inv.compose(&sarkar_iota)?.compose(&sw)?;
    Ok((IotaComplex::new(cr, iota_r)?, sw))
}

/// `f^r = sw⁻¹ ∘ f ∘ sw : S^r → T^r` for a map `f : S → T`.
pub fn reflect_map(f: &GradedMap, source_r: &Arc<Complex>, target_r: &Arc<Complex>) -> Result<GradedMap> {
    let sw = switch_map(source_r, f.source())?;
    let sw_inv = switch_map(f.target(), target_r)?;
    sw_inv.compose(f)?.compose(&sw)
}
