//! Natural maps between sums of symmetric tensors, their lifts through the
//! multiplications `S^λ(S^p) -> S^{pλ}`, and the functor to Troesch complexes.
mod flatten;
mod lift;
mod symhom;
mod tfunctor;

pub use flatten::{flatten, Flattening};
pub use lift::{check_frobenius, check_lift_sampled, check_lift_square, twist_lift};
pub use symhom::{hom_basis, key_position, HomTerm, SymHom, SymSum};
pub use tfunctor::{apply_lift, t_of_sum, T_map, T_monoidal, T_object, TMap, TObject};
