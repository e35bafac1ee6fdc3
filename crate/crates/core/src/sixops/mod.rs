//! The six operations on ind-sheaves: tensor product and internal hom,
//! restriction to opens and the Hom presheaf, inverse image, direct image
//! and proper direct image, and the projection and base change formulas
//! as checked isomorphism claims.
//!
//! Every operation is levelwise on sequential systems. The certificate of
//! the result is searched among a few candidates derived from the operands
//! and validated like any other certificate.

mod certify;
mod formulas;
mod images;
mod restrict;
mod tensor;
#[cfg(test)]
mod tests;

pub use formulas::{
    base_change_check, probe_opens, projection_formula_check, CartesianSquare, ProbeLine, Report,
};
pub use images::{
    direct_image_ind, inverse_image_ind, inverse_image_ind_morphism, open_embedding_comparison,
    proper_comparison, proper_direct_image_ind,
};
pub use restrict::{hom_presheaf, restrict, restrict_morphism, Glueing, HomPresheaf};
pub use tensor::{ihom_ind, tensor_ind};
