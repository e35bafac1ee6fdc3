//! Ind-objects built from presheaves on bounded opens that satisfy the
//! Mayer–Vietoris conditions. Such an object is represented by its Hom
//! functor on compactly supported sheaves: `Hom(k_U, F⁺) = F(U)`, extended
//! to any `G` through a presentation by left exactness.

mod ind;
mod presheaf;

pub use ind::{extend, rho_view, EvaluatedMorphism, Evaluation, FunctorBackedInd};
pub use presheaf::{check_mv, MvLine, MvReport, PresheafKind, PresheafOnT, Table};

#[cfg(test)]
mod tests;
