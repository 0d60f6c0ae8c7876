use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::relations::check_iota_relations;
use super::IotaComplex;
use crate::algebra::{Monomial, Ring};
use crate::complex::{validate_complex, Bigrading, ComplexBuilder, GradedMap, MapMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinName {
    Unknot,
    Fig8,
}

impl BuiltinName {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinName::Unknot => "unknot",
            BuiltinName::Fig8 => "fig8",
        }
    }
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unknot" => Ok(BuiltinName::Unknot),
            "fig8" => Ok(BuiltinName::Fig8),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }
}

/// Built-in ι-complexes. Each is validated and its ι relations checked
/// before it is returned.
pub fn builtin(name: BuiltinName) -> Result<IotaComplex> {
    let one = Monomial::ONE;
    let (u, v) = (Monomial::new(1, 0), Monomial::new(0, 1));
    let mut b = ComplexBuilder::new(Ring::TwoVariable);
    let images: Vec<(&str, Vec<(&str, Monomial)>)> = match name {
        BuiltinName::Unknot => {
            b.generator("x", Bigrading::ZERO)?;
            vec![("x", vec![("x", one)])]
        }
        BuiltinName::Fig8 => {
            b.generator("x", Bigrading::ZERO)?;
            b.generator("a", Bigrading::ZERO)?;
            b.generator("b", Bigrading::new(1, -1))?;
            b.generator("c", Bigrading::new(-1, 1))?;
            b.generator("d", Bigrading::ZERO)?;
            b.arrow("a", "b", u)?;
            b.arrow("a", "c", v)?;
            b.arrow("b", "d", v)?;
            b.arrow("c", "d", u)?;
            vec![
                ("x", vec![("x", one), ("d", one)]),
                ("a", vec![("a", one), ("x", one)]),
                ("b", vec![("c", one)]),
                ("c", vec![("b", one)]),
                ("d", vec![("d", one)]),
            ]
        }
    };
    let c = Arc::new(b.build()?);
    validate_complex(&c).into_result()?;
    let iota = GradedMap::from_images(c.clone(), c.clone(), MapMode::Skew, Bigrading::ZERO, images)?;
    let k = IotaComplex::new(c, iota)?;
    if !check_iota_relations(&k.complex, &k.iota, None)?.all_pass() {
        return Err(Error::Internal(format!("built-in complex {name} fails its ι relations")));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig8_iota_of_a() {
        let k = builtin(BuiltinName::Fig8).unwrap();
        let a = k.complex.require_index("a").unwrap();
        assert_eq!(k.complex.format_chain(k.iota.image(a)), "x+a");
        assert_eq!(k.complex.len(), 5);
    }

    #[test]
    fn unknown_name() {
        assert_eq!("trefoil".parse::<BuiltinName>().err(), Some(Error::UnknownBuiltin("trefoil".into())));
    }
}
