//! Exact computations around the cohomology of `GL_n` with coefficients in
//! divided powers of the Frobenius-twisted adjoint representation, over
//! finite fields of small characteristic.

pub mod bar;
pub mod cohomology;
pub mod error;
pub mod ffalg;
pub mod functor;
pub mod pcomplex;
pub mod report;
pub mod suites;
pub mod troesch;
pub mod twistcat;

pub use error::{Error, Result};
