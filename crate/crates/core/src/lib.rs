//! Silting theory in the homotopy category of perfect complexes over a
//! finite-dimensional path algebra.

pub mod algebra;
pub mod approx;
pub mod complex;
pub mod decompose;
pub mod exceptional;
pub mod explorer;
pub mod field;
pub mod linalg;
pub mod module_cat;
pub mod mutation;
pub mod poly;
pub mod silting;

pub use algebra::{build_algebra, Algebra, AlgebraError, Presentation};
pub use field::{Field, Scalar};
