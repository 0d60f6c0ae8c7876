use std::sync::Arc;

use crate::algebra::Ring;
use crate::complex::{Bigrading, Complex, GradedMap, MapMode};
use crate::error::{Error, Result};

fn derivative_map(c: &Arc<Complex>, wrt_u: bool) -> Result<GradedMap> {
    if c.ring() != Ring::TwoVariable {
        return Err(Error::RingMismatch(c.ring(), Ring::TwoVariable));
    }
    let entries = c.differential().map_entries(|p| p.derivative(wrt_u));
    // Dividing a (-1,-1) entry by U raises gr_U by two.
    let degree = if wrt_u { Bigrading::new(1, -1) } else { Bigrading::new(-1, 1) };
    GradedMap::new(c.clone(), c.clone(), MapMode::Linear, degree, entries)
}

/// `Φ = d/dU ∂`, of bidegree (1, -1).
pub fn phi(c: &Arc<Complex>) -> Result<GradedMap> {
    derivative_map(c, true)
}

/// `Ψ = d/dV ∂`, of bidegree (-1, 1).
pub fn psi(c: &Arc<Complex>) -> Result<GradedMap> {
    derivative_map(c, false)
}

/// The Sarkar map, taken at chain level to be `id + Φ ∘ Ψ`.
pub fn sarkar(c: &Arc<Complex>) -> Result<GradedMap> {
    phi(c)?.compose(&psi(c)?)?.plus_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::builtin::{builtin, BuiltinName};

    #[test]
    fn fig8_derivatives() {
        let k = builtin(BuiltinName::Fig8).unwrap();
        let c = &k.complex;
        let images = |f: &GradedMap| f.describe().into_iter().filter(|(_, v)| v != "0").collect::<Vec<_>>();
        let s = |a: &str, b: &str| (a.to_string(), b.to_string());
        let phi = phi(c).unwrap();
        let psi = psi(c).unwrap();
        assert_eq!(images(&phi), vec![s("a", "b"), s("c", "d")]);
        assert_eq!(images(&psi), vec![s("a", "c"), s("b", "d")]);
        assert!(phi.is_chain_map() && psi.is_chain_map());
        assert!(phi.is_homogeneous() && psi.is_homogeneous());
        let sarkar = sarkar(c).unwrap();
        assert_eq!(images(&sarkar.add(&GradedMap::identity(c)).unwrap()), vec![s("a", "d")]);
    }

    #[test]
    fn unknot_sarkar_is_identity() {
        let k = builtin(BuiltinName::Unknot).unwrap();
        assert_eq!(sarkar(&k.complex).unwrap(), GradedMap::identity(&k.complex));
    }
}
