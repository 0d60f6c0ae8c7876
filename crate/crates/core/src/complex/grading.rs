use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::algebra::{Monomial, Ring};

/// A pair `(gr_U, gr_V)`. One-variable complexes store their Maslov grading
/// `m` as `(m, m)` so that both modes share one arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bigrading {
    pub u: i64,
    pub v: i64,
}

impl Bigrading {
    pub const ZERO: Bigrading = Bigrading { u: 0, v: 0 };
    /// Degree of every differential.
    pub const DIFFERENTIAL: Bigrading = Bigrading { u: -1, v: -1 };
    /// Degree shift of a homotopy relative to the maps it relates.
    pub const HOMOTOPY_STEP: Bigrading = Bigrading { u: 1, v: 1 };

    pub const fn new(u: i64, v: i64) -> Self {
        Bigrading { u, v }
    }

    pub const fn maslov(m: i64) -> Self {
        Bigrading { u: m, v: m }
    }

    pub fn swap(self) -> Self {
        Bigrading::new(self.v, self.u)
    }

    /// `(gr_U - gr_V) / 2`, if it is an integer.
    pub fn alexander(self) -> Option<i64> {
        let diff = self.u - self.v;
        (diff % 2 == 0).then_some(diff / 2)
    }
}

impl Add for Bigrading {
    type Output = Bigrading;
    fn add(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for Bigrading {
    type Output = Bigrading;
    fn sub(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.u - o.u, self.v - o.v)
    }
}

impl Neg for Bigrading {
    type Output = Bigrading;
    fn neg(self) -> Bigrading {
        Bigrading::new(-self.u, -self.v)
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Grading of a ring element. In F2[U] the variable U stands for the
/// product UV and so has degree (-2, -2).
pub fn monomial_grading(ring: Ring, m: Monomial) -> Bigrading {
    match ring {
        Ring::TwoVariable => Bigrading::new(-2 * m.u as i64, -2 * m.v as i64),
        Ring::OneVariable => Bigrading::maslov(-2 * m.u as i64),
    }
}

/// The unique monomial `m` with `gr(target) + gr(m) = image`, if any.
///
/// `image` is where a homogeneous map sends the source generator, i.e. the
/// (possibly swapped) source grading plus the map degree.
pub fn forced_monomial(ring: Ring, target: Bigrading, image: Bigrading) -> Option<Monomial> {
    let gap = target - image;
    if gap.u < 0 || gap.v < 0 || gap.u % 2 != 0 || gap.v % 2 != 0 {
        return None;
    }
    let (i, j) = ((gap.u / 2) as u32, (gap.v / 2) as u32);
    match ring {
        Ring::TwoVariable => Some(Monomial::new(i, j)),
        Ring::OneVariable => (i == j).then_some(Monomial::u_power(i)),
    }
}
