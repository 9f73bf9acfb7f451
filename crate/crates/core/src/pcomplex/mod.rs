//! N-complexes and the comparison between p-complexes and ordinary
//! complexes: contraction, the tilde construction, both tensor products and
//! the comparison maps between them.

mod ncomplex;
mod ops;
pub mod random;

pub use ncomplex::{ChainMap, GradedEmbedding, NComplex, NMap, NCOMPLEX_MAGIC};
pub use ops::{
    contract, contract_map, contraction_degrees, embedding_multiplicity, eta, eta_tensor, h_map, h_map_big,
    is_p_coresolution, p_embed, tensor_layout, tensor_ord, tensor_ord_map, tensor_p, tilde, tilde_position,
    ContractionHomology, CoresolutionReport, Summand,
};
pub(crate) use ops::is_p_coresolution_with;
