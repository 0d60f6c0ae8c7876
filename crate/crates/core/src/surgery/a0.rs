use std::sync::Arc;

use super::SurgeryComplex;
use crate::algebra::{Monomial, MonomialMatrix, Ring};
use crate::complex::{Bigrading, Complex, Generator, GradedMap, MapMode};
use crate::error::{Error, Result};
use crate::knot::IotaTauComplex;

/// The monomial `m_g` with `m_g · g` in Alexander grading zero: `U^A` for
/// `A ≥ 0`, `V^{-A}` otherwise.
fn normalizer(grading: Bigrading) -> Result<Monomial> {
    let a = grading
        .alexander()
        .ok_or_else(|| Error::Structure(format!("grading {grading} has a half-integer Alexander grading")))?;
    Ok(if a >= 0 { Monomial::new(a as u32, 0) } else { Monomial::new(0, (-a) as u32) })
}

/// Rewrites `m · h` as `U^k · (m_h h)` where `U` stands for the product UV.
fn as_one_variable(m: Monomial, target_normalizer: Monomial) -> Option<Monomial> {
    let q = target_normalizer.quotient(m)?;
    (q.u == q.v).then_some(Monomial::u_power(q.u))
}

fn restrict(f: &GradedMap, normalizers: &[Monomial], a0: &Arc<Complex>, name: &str) -> Result<MonomialMatrix> {
    let mut out = MonomialMatrix::zeros(Ring::OneVariable, a0.len(), a0.len());
    for (j, mj) in normalizers.iter().enumerate() {
        let scale = match f.mode() {
            MapMode::Linear => *mj,
            MapMode::Skew => mj.swap(),
        };
        for (i, p) in f.image(j) {
            for term in p.terms() {
                let m = as_one_variable(term.mul(scale), normalizers[*i]).ok_or_else(|| {
                    Error::Structure(format!(
                        "{name} does not preserve Alexander grading zero ({} -> {})",
                        a0.id(j),
                        a0.id(*i)
                    ))
                })?;
                out.add_monomial(*i, j, m);
            }
        }
    }
    Ok(out)
}

/// The Alexander-grading-zero subcomplex as a complex over F2[U], U = UV,
/// with basis `m_g · g` named after `g` and Maslov grading `gr_U = gr_V`.
pub fn extract_a0(k: &IotaTauComplex) -> Result<SurgeryComplex> {
    let c = &k.complex;
    if c.ring() != Ring::TwoVariable {
        return Err(Error::RingMismatch(c.ring(), Ring::TwoVariable));
    }
    let normalizers = c.generators().iter().map(|g| normalizer(g.grading)).collect::<Result<Vec<_>>>()?;
    let generators = c
        .generators()
        .iter()
        .zip(&normalizers)
        .map(|(g, m)| {
            let gr = g.grading + Bigrading::new(-2 * m.u as i64, -2 * m.v as i64);
            debug_assert_eq!(gr.u, gr.v);
            Generator { id: g.id.clone(), grading: gr }
        })
        .collect();
    let placeholder = Arc::new(Complex::new(
        Ring::OneVariable,
        generators,
        MonomialMatrix::zeros(Ring::OneVariable, c.len(), c.len()),
        0.into(),
    )?);
    let d = restrict(&c.differential_map(), &normalizers, &placeholder, "∂")?;
    let a0 = Arc::new(Complex::new(Ring::OneVariable, placeholder.generators().to_vec(), d, 0.into())?);
    let iota = restrict(&k.iota, &normalizers, &a0, "ι")?;
    let tau = restrict(&k.tau, &normalizers, &a0, "τ")?;
    let iota = GradedMap::new(a0.clone(), a0.clone(), MapMode::Linear, Bigrading::ZERO, iota)?;
    let tau = GradedMap::new(a0.clone(), a0.clone(), MapMode::Linear, Bigrading::ZERO, tau)?;
    SurgeryComplex::new(a0, iota, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{builtin, double, BuiltinName, Convention};

    #[test]
    fn a0_of_unknot_double() {
        let k = builtin(BuiltinName::Unknot).unwrap();
        let s = extract_a0(&double(&k, Convention::Thm31).unwrap()).unwrap();
        assert_eq!(s.complex.len(), 1);
        assert!(s.complex.differential().is_zero());
    }

    #[test]
    fn a0_of_fig8_double() {
        let k = builtin(BuiltinName::Fig8).unwrap();
        let d = double(&k, Convention::Thm31).unwrap();
        let s = extract_a0(&d).unwrap();
        s.check().unwrap();
        assert_eq!(s.complex.len(), 25);
        // Alexander gradings recomputed from the two factors' gradings.
        let alex = |g: &str| match g {
            "b" => 1,
            "c" => -1,
            _ => 0,
        };
        for (i, g) in d.complex.generators().iter().enumerate() {
            let (p, q) = g.id.split_once('|').unwrap();
            // the right factor is reflected, which negates Alexander gradings
            assert_eq!(g.grading.alexander().unwrap(), alex(p) - alex(q), "{}", g.id);
            let expected_maslov = if g.grading.alexander().unwrap() >= 0 { g.grading.v } else { g.grading.u };
            assert_eq!(s.complex.maslov(i), expected_maslov);
        }
        for id in ["x|x", "x|d", "d|x", "a|d", "d|a", "b|b", "c|c", "d|d"] {
            assert_eq!(s.complex.maslov(s.complex.require_index(id).unwrap()), 0, "{id}");
        }
    }
}
