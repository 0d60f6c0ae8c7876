//! Chain complexes over F2[U,V] and F2[U], graded maps between them and the
//! constructions built on them.

#[allow(clippy::module_inception)]
mod complex;
pub mod dual;
pub mod grading;
pub mod homotopy;
pub mod map;
pub mod reduce;
pub mod tensor;

pub use complex::{
    chain_add_scaled, term_grading, validate_complex, Chain, Complex, ComplexBuilder, Generator, ValidationReport,
    Violation,
};
pub use dual::{dual_complex, dual_id, dual_map, dual_map_between, dualize};
pub use grading::{forced_monomial, monomial_grading, Bigrading};
pub use homotopy::{homotopic, null_homotopy};
pub use map::{same_complex, GradedMap, MapMode};
pub use reduce::{chain_coefficient, reduce, ReductionCertificate};
pub use tensor::{tensor_complex, tensor_id, tensor_index, tensor_maps, tensor_maps_between};
