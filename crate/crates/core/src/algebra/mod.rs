//! Coefficient arithmetic: polynomials over F2, F2 linear algebra,
//! polynomial matrices and Smith normal form over F2[U].

pub mod f2;
pub mod matrix;
pub mod poly;
pub mod snf;

pub use f2::{f2_kernel, f2_solve, Elimination, F2Matrix, F2Vec, Span};
pub use matrix::MonomialMatrix;
pub use poly::{poly_arith, Monomial, Poly, PolyOp, Ring};
pub use snf::{snf_over_fu, SmithForm};
