//! Multi-component extended-precision complex linear algebra.
//!
//! Real values are [`Expansion`]s of 2, 3 or 4 binary64 components
//! (double-, triple-, quad-double). Complex matrices keep real and imaginary
//! parts in separate planes, and each plane keeps components of equal
//! significance contiguous. On top of that sit four real matrix kernels
//! (naive, blocked, Strassen, Ozaki), 3M/4M complex products, and normal and
//! blocked LU decomposition with partial pivoting.

pub mod bench;
pub mod complex;
pub mod complex_matmul;
pub mod error;
pub mod expansion;
pub mod lu;
pub mod matrix;
mod parallel;
pub mod real_matmul;
pub mod verify;

pub use complex::{ComplexScalar, Method};
pub use error::{Error, Result};
pub use expansion::{DoubleDouble, Expansion, QuadDouble, Reference, TripleDouble};
pub use matrix::{ComplexVector, PlanarComplexMatrix, RealMatrix};
