//! Random test inputs: small ι-complexes and surgery complexes presented in
//! scrambled bases, with ι and τ moved within their homotopy classes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Monomial, MonomialMatrix, Ring};
use crate::complex::{Bigrading, Complex, ComplexBuilder, GradedMap, MapMode};
use crate::error::{Error, Result};
use crate::knot::{builtin, check_iota_relations, BuiltinName, IotaComplex};
use crate::surgery::SurgeryComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKnot {
    Unknot,
    Trefoil,
    MirrorTrefoil,
    Fig8,
}

impl SampleKnot {
    pub const ALL: [SampleKnot; 4] =
        [SampleKnot::Unknot, SampleKnot::Trefoil, SampleKnot::MirrorTrefoil, SampleKnot::Fig8];

    pub fn name(self) -> &'static str {
        match self {
            SampleKnot::Unknot => "unknot",
            SampleKnot::Trefoil => "trefoil",
            SampleKnot::MirrorTrefoil => "mirror-trefoil",
            SampleKnot::Fig8 => "fig8",
        }
    }
}

impl fmt::Display for SampleKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKnot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleKnot::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownBuiltin(s.to_string()))
    }
}

/// A three-generator staircase `∂b = U a + V c` (or its dual) with ι
/// exchanging the ends.
fn staircase(mirror: bool) -> Result<IotaComplex> {
    let (u, v) = (Monomial::new(1, 0), Monomial::new(0, 1));
    let mut b = ComplexBuilder::new(Ring::TwoVariable);
    if mirror {
        b.generator("a", Bigrading::new(2, 0))?;
        b.generator("b", Bigrading::new(1, 1))?;
        b.generator("c", Bigrading::new(0, 2))?;
        b.arrow("a", "b", v)?;
        b.arrow("c", "b", u)?;
    } else {
        b.generator("a", Bigrading::new(0, -2))?;
        b.generator("b", Bigrading::new(-1, -1))?;
        b.generator("c", Bigrading::new(-2, 0))?;
        b.arrow("b", "a", u)?;
        b.arrow("b", "c", v)?;
    }
    let c = Arc::new(b.build()?);
    let one = Monomial::ONE;
    let iota = GradedMap::from_images(
        c.clone(),
        c.clone(),
        MapMode::Skew,
        Bigrading::ZERO,
        [("a", vec![("c", one)]), ("b", vec![("b", one)]), ("c", vec![("a", one)])],
    )?;
    IotaComplex::new(c, iota)
}

/// The ι-complex of a sample knot in its standard basis.
pub fn sample_knot(kind: SampleKnot) -> Result<IotaComplex> {
    match kind {
        SampleKnot::Unknot => builtin(BuiltinName::Unknot),
        SampleKnot::Fig8 => builtin(BuiltinName::Fig8),
        SampleKnot::Trefoil => staircase(false),
        SampleKnot::MirrorTrefoil => staircase(true),
    }
}

/// A random strictly upper triangular homogeneous endomorphism of degree 0
/// (so `id + N` is invertible with inverse `id + N + N² + ...`).
fn random_nilpotent(c: &Arc<Complex>, rng: &mut impl Rng, density: f64) -> Result<GradedMap> {
    let probe = GradedMap::zero(c.clone(), c.clone(), MapMode::Linear, Bigrading::ZERO)?;
    let mut entries = MonomialMatrix::zeros(c.ring(), c.len(), c.len());
    for s in 0..c.len() {
        for t in 0..s {
            if let Some(m) = probe.forced_entry(t, s) {
                if rng.gen_bool(density) {
                    entries.add_monomial(t, s, m);
                }
            }
        }
    }
    GradedMap::new(c.clone(), c.clone(), MapMode::Linear, Bigrading::ZERO, entries)
}

/// `(id + N, (id + N)^-1)` for a random nilpotent `N`.
fn random_unipotent(c: &Arc<Complex>, rng: &mut impl Rng, density: f64) -> Result<(GradedMap, GradedMap)> {
    let n = random_nilpotent(c, rng, density)?;
    let a = n.plus_identity()?;
    let mut inverse = GradedMap::identity(c);
    let mut power = n.clone();
    while !power.is_zero() {
        inverse = inverse.add(&power)?;
        power = power.compose(&n)?;
    }
    Ok((a, inverse))
}

/// The complex with differential `A ∂ A^-1` and a function transporting
/// endomorphisms `f ↦ A f A^-1` onto it.
fn change_basis(
    c: &Arc<Complex>,
    a: &GradedMap,
    a_inv: &GradedMap,
) -> Result<(Arc<Complex>, impl Fn(&GradedMap) -> Result<GradedMap>)> {
    let d = a.compose(&c.differential_map())?.compose(a_inv)?;
    let new = Arc::new(Complex::new(c.ring(), c.generators().to_vec(), d.entries().clone(), c.shift())?);
    let (a, a_inv, target) = (a.clone(), a_inv.clone(), new.clone());
    let transport = move |f: &GradedMap| -> Result<GradedMap> {
        let g = a.compose(f)?.compose(&a_inv)?;
        GradedMap::new(target.clone(), target.clone(), g.mode(), g.degree(), g.entries().clone())
    };
    Ok((new, transport))
}

/// `f + ∂H + H∂` for a random homogeneous `H` of the right mode and degree.
fn perturb(f: &GradedMap, rng: &mut impl Rng, density: f64) -> Result<GradedMap> {
    let c = f.source();
    let probe = GradedMap::zero(c.clone(), c.clone(), f.mode(), f.degree() + Bigrading::HOMOTOPY_STEP)?;
    let mut entries = MonomialMatrix::zeros(c.ring(), c.len(), c.len());
    for s in 0..c.len() {
        for t in 0..c.len() {
            if let Some(m) = probe.forced_entry(t, s) {
                if rng.gen_bool(density) {
                    entries.add_monomial(t, s, m);
                }
            }
        }
    }
    let h = GradedMap::new(c.clone(), c.clone(), f.mode(), probe.degree(), entries)?;
    f.add(&h.commutator_with_differential()?)
}

/// The same ι-complex in a random basis with ι moved within its homotopy
/// class, together with the change-of-basis isomorphism from the input.
/// The ι relations are re-checked.
pub fn scramble_iota_with_map(k: &IotaComplex, rng: &mut impl Rng) -> Result<(IotaComplex, GradedMap)> {
    let (a, a_inv) = random_unipotent(&k.complex, rng, 0.5)?;
    let (c, transport) = change_basis(&k.complex, &a, &a_inv)?;
    let iota = perturb(&transport(&k.iota)?, rng, 0.3)?;
    let out = IotaComplex::new(c.clone(), iota)?;
    if !check_iota_relations(&out.complex, &out.iota, None)?.all_pass() {
        return Err(Error::Internal("scrambled complex fails its ι relations".into()));
    }
    let map = GradedMap::new(k.complex.clone(), c, MapMode::Linear, Bigrading::ZERO, a.entries().clone())?;
    Ok((out, map))
}

pub fn scramble_iota_complex(k: &IotaComplex, rng: &mut impl Rng) -> Result<IotaComplex> {
    Ok(scramble_iota_with_map(k, rng)?.0)
}

/// A random sample knot in a scrambled basis.
pub fn random_iota_complex(rng: &mut impl Rng) -> Result<(SampleKnot, IotaComplex)> {
    let kind = SampleKnot::ALL[rng.gen_range(0..SampleKnot::ALL.len())];
    Ok((kind, scramble_iota_complex(&sample_knot(kind)?, rng)?))
}

/// The same surgery complex in a random basis, with ι and τ perturbed by
/// random null-homotopic maps, and the change-of-basis isomorphism.
pub fn scramble_surgery_with_map(s: &SurgeryComplex, rng: &mut impl Rng) -> Result<(SurgeryComplex, GradedMap)> {
    let (a, a_inv) = random_unipotent(&s.complex, rng, 0.5)?;
    let (c, transport) = change_basis(&s.complex, &a, &a_inv)?;
    let iota = perturb(&transport(&s.iota)?, rng, 0.3)?;
    let tau = perturb(&transport(&s.tau)?, rng, 0.3)?;
    let out = SurgeryComplex::new(c.clone(), iota, tau)?;
    out.check()?;
    let map = GradedMap::new(s.complex.clone(), c, MapMode::Linear, Bigrading::ZERO, a.entries().clone())?;
    Ok((out, map))
}

pub fn scramble_surgery(s: &SurgeryComplex, rng: &mut impl Rng) -> Result<SurgeryComplex> {
    Ok(scramble_surgery_with_map(s, rng)?.0)
}

fn random_grading(ring: Ring, rng: &mut impl Rng) -> Bigrading {
    match ring {
        Ring::OneVariable => Bigrading::maslov(rng.gen_range(-3..=3)),
        Ring::TwoVariable => {
            let u = rng.gen_range(-3..=3);
            Bigrading::new(u, u + 2 * rng.gen_range(-1..=1))
        }
    }
}

fn random_monomial(ring: Ring, rng: &mut impl Rng, allow_unit: bool) -> Monomial {
    loop {
        let m = match ring {
            Ring::OneVariable => Monomial::u_power(rng.gen_range(0..=2)),
            Ring::TwoVariable => Monomial::new(rng.gen_range(0..=2), rng.gen_range(0..=2)),
        };
        if allow_unit || !m.is_one() {
            return m;
        }
    }
}

/// Grading of the target of an arrow `source → m · target`.
fn arrow_target(ring: Ring, source: Bigrading, m: Monomial) -> Bigrading {
    let lift = match ring {
        Ring::OneVariable => Bigrading::maslov(2 * m.u as i64),
        Ring::TwoVariable => Bigrading::new(2 * m.u as i64, 2 * m.v as i64),
    };
    source + Bigrading::DIFFERENTIAL + lift
}

/// A random valid complex with at most `max_generators` generators: a
/// direct sum of single generators, arrows and squares, presented in a
/// random basis. Unit arrows appear only when `allow_units` is set.
pub fn random_complex(
    ring: Ring,
    max_generators: usize,
    allow_units: bool,
    rng: &mut impl Rng,
) -> Result<Arc<Complex>> {
    let mut b = ComplexBuilder::new(ring);
    let mut count = 0;
    let mut block = 0;
    let target = rng.gen_range(1..=max_generators.max(1));
    while count < target {
        let room = target - count;
        let name = |k: usize| format!("g{block}_{k}");
        let kind = rng.gen_range(0..3).min(match room {
            1 => 0,
            2 | 3 => 1,
            _ => 2,
        });
        let top = random_grading(ring, rng);
        match kind {
            0 => {
                b.generator(&name(0), top)?;
                count += 1;
            }
            1 => {
                let m = random_monomial(ring, rng, allow_units);
                b.generator(&name(0), top)?;
                b.generator(&name(1), arrow_target(ring, top, m))?;
                b.arrow(&name(0), &name(1), m)?;
                count += 2;
            }
            _ => {
                let (p, q) = match ring {
                    Ring::OneVariable => {
                        (Monomial::u_power(rng.gen_range(1..=2)), Monomial::u_power(rng.gen_range(1..=2)))
                    }
                    Ring::TwoVariable => {
                        (Monomial::new(rng.gen_range(1..=2), 0), Monomial::new(0, rng.gen_range(1..=2)))
                    }
                };
                let left = arrow_target(ring, top, p);
                let right = arrow_target(ring, top, q);
                b.generator(&name(0), top)?;
                b.generator(&name(1), left)?;
                b.generator(&name(2), right)?;
                b.generator(&name(3), arrow_target(ring, left, q))?;
                b.arrow(&name(0), &name(1), p)?;
                b.arrow(&name(0), &name(2), q)?;
                b.arrow(&name(1), &name(3), q)?;
                b.arrow(&name(2), &name(3), p)?;
                count += 4;
            }
        }
        block += 1;
    }
    let c = Arc::new(b.build()?);
    let (a, a_inv) = random_unipotent(&c, rng, 0.4)?;
    Ok(change_basis(&c, &a, &a_inv)?.0)
}

/// A random chain endomorphism of degree zero homotopic to the identity.
pub fn random_chain_endomorphism(c: &Arc<Complex>, rng: &mut impl Rng) -> Result<GradedMap> {
    perturb(&GradedMap::identity(c), rng, 0.4)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complex::validate_complex;

    #[test]
    fn samples_pass_relations() {
        for kind in SampleKnot::ALL {
            let k = sample_knot(kind).unwrap();
            assert!(validate_complex(&k.complex).is_valid(), "{kind}");
            assert!(check_iota_relations(&k.complex, &k.iota, None).unwrap().all_pass(), "{kind}");
        }
    }

    #[test]
    fn scrambling_keeps_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (_, k) = random_iota_complex(&mut rng).unwrap();
            assert!(validate_complex(&k.complex).is_valid());
        }
    }
}
