//! Finite fields, sparse matrices and exact linear algebra.

mod basis;
pub mod codec;
mod complex;
mod field;
pub mod linalg;
mod matrix;

pub use basis::Basis;
pub use complex::{BasedComplex, Homology};
pub use field::{Elem, Field, FieldRef};
pub use linalg::{Echelon, Rref};
pub use matrix::{axpy, normalize, scale, FFMatrix, SpVec};
