pub mod algebra;
pub mod complex;
pub mod error;
pub mod knot;
pub mod sample;
pub mod surgery;

pub use algebra::*;
pub use complex::*;
pub use error::{Error, Result};
pub use knot::*;
pub use surgery::*;
