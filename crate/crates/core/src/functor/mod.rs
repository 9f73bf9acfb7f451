//! Strict polynomial functor expressions, their evaluation on based spaces
//! and matrices, and structural natural transformations.

pub mod combin;
mod eval;
mod expr;
mod gl;
mod natmap;
pub mod sample;
pub mod sexpr;
pub mod symtensor;

pub use eval::{eval_map, eval_space};
pub use expr::FunctorExpr;
pub use gl::{adjoint, gl_basis, gl_eval, gl_eval_with_inverse, BifunctorExpr};
pub use natmap::NatMap;
pub(crate) use natmap::tuples;
