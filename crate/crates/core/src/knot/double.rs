use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::derivative::{phi, psi, sarkar};
use super::reflect::reflect;
use super::{IotaComplex, IotaTauComplex};
use crate::algebra::MonomialMatrix;
use crate::complex::{tensor_complex, tensor_index, tensor_maps_between, Bigrading, Complex, GradedMap, MapMode};
use crate::error::{Error, Result};

/// Which formula pair defines τ and ι on the double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `τ = (id + Ψ⊗Φ) ∘ τ_exch`, `ι = ς ∘ (id + Ψ⊗Φ) ∘ (ι ⊗ ι^r)`.
    #[default]
    Thm31,
    /// `τ = ς ∘ (id + Ψ⊗Φ) ∘ τ_exch`, `ι = (id + Ψ⊗Φ) ∘ (ι ⊗ ι^r)`.
    Remark32,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Thm31 => "thm31",
            Convention::Remark32 => "remark32",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm31" => Ok(Convention::Thm31),
            "remark32" => Ok(Convention::Remark32),
            other => Err(Error::InvalidArgument(format!("unknown convention `{other}`"))),
        }
    }
}

/// Every ingredient of the double, kept for certificates and tests.
#[derive(Debug, Clone)]
pub struct DoubleParts {
    pub left: IotaComplex,
    pub right: IotaComplex,
    pub tensor: Arc<Complex>,
    pub tau_exch: GradedMap,
    /// `id + Ψ_C ⊗ Φ_{C^r}`
    pub correction: GradedMap,
    /// `ι_C ⊗ ι_{C^r}`
    pub iota_product: GradedMap,
    /// Sarkar map of the whole tensor complex.
    pub sarkar: GradedMap,
    pub result: IotaTauComplex,
}

/// `p|q ↦ q|p` on `C ⊗ C^r`, identifying generators of `C` and `C^r` by index.
pub fn exchange_map(tensor: &Arc<Complex>, n: usize) -> Result<GradedMap> {
    if tensor.len() != n * n {
        return Err(Error::Incompatible("exchange map needs a square tensor product".into()));
    }
    let mut entries = MonomialMatrix::zeros(tensor.ring(), n * n, n * n);
    for p in 0..n {
        for q in 0..n {
            entries.add_monomial(tensor_index(n, q, p), tensor_index(n, p, q), crate::algebra::Monomial::ONE);
        }
    }
    GradedMap::new(tensor.clone(), tensor.clone(), MapMode::Skew, Bigrading::ZERO, entries)
}

/// `τ_exch` on `C ⊗ C^r`.
pub fn tau_exch(k: &IotaComplex) -> Result<GradedMap> {
    let (kr, _) = reflect(k)?;
    let tensor = Arc::new(tensor_complex(&k.complex, &kr.complex)?);
    exchange_map(&tensor, k.complex.len())
}

pub fn double_parts(k: &IotaComplex, convention: Convention) -> Result<DoubleParts> {
    let (right, _) = reflect(k)?;
    let tensor = Arc::new(tensor_complex(&k.complex, &right.complex)?);
    let exch = exchange_map(&tensor, k.complex.len())?;
    let cross = tensor_maps_between(&psi(&k.complex)?, &phi(&right.complex)?, &tensor, &tensor)?;
    let correction = cross.plus_identity()?;
    let iota_product = tensor_maps_between(&k.iota, &right.iota, &tensor, &tensor)?;
    let sarkar_t = sarkar(&tensor)?;
    let (tau, iota) = match convention {
        Convention::Thm31 => (correction.compose(&exch)?, sarkar_t.compose(&correction)?.compose(&iota_product)?),
        Convention::Remark32 => (sarkar_t.compose(&correction)?.compose(&exch)?, correction.compose(&iota_product)?),
    };
    let result = IotaTauComplex::new(tensor.clone(), iota, tau)?;
    Ok(DoubleParts {
        left: k.clone(),
        right,
        tensor,
        tau_exch: exch,
        correction,
        iota_product,
        sarkar: sarkar_t,
        result,
    })
}

/// `C ↦ (C ⊗ C^r, τ_⊗, ι_⊗)`.
pub fn double(k: &IotaComplex, convention: Convention) -> Result<IotaTauComplex> {
    Ok(double_parts(k, convention)?.result)
}
