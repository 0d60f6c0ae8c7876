use std::sync::Arc;

use super::complex::{Complex, Generator};
use super::map::{GradedMap, MapMode};
use crate::error::{Error, Result};

/// True if `s` starts with `(` whose matching `)` is the last character.
fn fully_parenthesized(s: &str) -> bool {
    if !s.starts_with('(') || !s.ends_with(')') {
        return false;
    }
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 != s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Name of the dual basis element: `x` ↔ `x*`, `x|d` ↔ `(x|d)*`.
pub fn dual_id(id: &str) -> String {
    if let Some(base) = id.strip_suffix('*') {
        if fully_parenthesized(base) {
            return base[1..base.len() - 1].to_string();
        }
        if !base.contains('|') && !base.is_empty() {
            return base.to_string();
        }
    }
    if id.contains('|') || id.ends_with('*') {
        format!("({id})*")
    } else {
        format!("{id}*")
    }
}

/// The dual complex: dual basis, negated gradings and shift, transposed
/// differential.
pub fn dual_complex(c: &Complex) -> Result<Complex> {
    let generators = c.generators().iter().map(|g| Generator { id: dual_id(&g.id), grading: -g.grading }).collect();
    Complex::new(c.ring(), generators, c.differential().transpose(), -c.shift())
}

/// `f^∨ : T^∨ → S^∨` for `f : S → T`, between the given dual complexes.
///
/// A linear map keeps its degree. A skew map keeps its mode; its entries and
/// degree are swapped so that the dual is again homogeneous.
pub fn dual_map_between(f: &GradedMap, source_dual: &Arc<Complex>, target_dual: &Arc<Complex>) -> Result<GradedMap> {
    if source_dual.len() != f.target().len() || target_dual.len() != f.source().len() {
        return Err(Error::Incompatible("dual complexes do not match the map".into()));
    }
    let transposed = f.entries().transpose();
    let (entries, degree) = match f.mode() {
        MapMode::Linear => (transposed, f.degree()),
        MapMode::Skew => (transposed.swap_variables(), f.degree().swap()),
    };
    GradedMap::new(source_dual.clone(), target_dual.clone(), f.mode(), degree, entries)
}

/// `f^∨`, building the dual complexes.
pub fn dual_map(f: &GradedMap) -> Result<GradedMap> {
    let t = Arc::new(dual_complex(f.target())?);
    let s = if f.is_endomorphism() { t.clone() } else { Arc::new(dual_complex(f.source())?) };
    dual_map_between(f, &t, &s)
}

/// Dualizes a complex together with a list of its endomorphisms.
pub fn dualize(c: &Complex, maps: &[GradedMap]) -> Result<(Arc<Complex>, Vec<GradedMap>)> {
    let dual = Arc::new(dual_complex(c)?);
    let mut out = Vec::with_capacity(maps.len());
    for f in maps {
        if **f.source() != *c || **f.target() != *c {
            return Err(Error::Incompatible("only endomorphisms of the complex can be dualized with it".into()));
        }
        out.push(dual_map_between(f, &dual, &dual)?);
    }
    Ok((dual, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Ring};
    use crate::complex::{validate_complex, Bigrading, ComplexBuilder};

    #[test]
    fn dual_names_round_trip() {
        for id in ["x", "x|d", "(x|d)|a", "1", "x*"] {
            assert_eq!(dual_id(&dual_id(id)), id);
        }
        assert_eq!(dual_id("x|d"), "(x|d)*");
        assert_eq!(dual_id("(a)|(b)"), "((a)|(b))*");
    }

    #[test]
    fn dual_of_two_step() {
        let mut b = ComplexBuilder::new(Ring::OneVariable);
        b.generator("a", Bigrading::maslov(1)).unwrap();
        b.generator("b", Bigrading::maslov(2)).unwrap();
        b.arrow("a", "b", Monomial::u_power(1)).unwrap();
        let c = b.build().unwrap();
        let d = dual_complex(&c).unwrap();
        assert!(validate_complex(&d).is_valid());
        let bs = d.require_index("b*").unwrap();
        assert_eq!(d.format_chain(d.boundary(bs)), "U*a*");
        assert_eq!(d.maslov(bs), -2);
        assert_eq!(d.maslov(d.require_index("a*").unwrap()), -1);
        assert_eq!(dual_complex(&d).unwrap(), c);
    }

    #[test]
    fn trivial_dual() {
        let c = crate::complex::Complex::trivial(Ring::OneVariable, "1");
        let d = dual_complex(&c).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.differential().is_zero());
    }
}
