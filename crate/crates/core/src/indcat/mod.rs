//! Ind-objects of compactly supported sheaves, presented by certified
//! sequential systems or finite filtered diagrams.

mod abelian;
mod beta;
mod colim;
mod functors;
mod hom;
mod morphism;
mod standard;
mod system;

pub use abelian::{
    cokernel, homology, is_exact, is_ind_zero, is_ind_zero_with, is_iso, kernel, Exactness,
    IndCokernel, IndKernel,
};
pub use beta::{beta, beta_closed, beta_closed_counit, beta_open, beta_open_counit};
pub use colim::{
    hom_from_sheaf, hom_from_sheaf_with, ColimSpace, Dim, Tag, Verdict, DEFAULT_TRUNCATION,
};
pub(crate) use functors::centered_interval;
pub use functors::{
    alpha, alpha_cocone, alpha_morphism, alpha_transpose, iota, iota_morphism, iota_transpose,
    AlphaCocone,
};
pub use hom::{hom_ind, hom_ind_with, HomInd};
pub use morphism::IndMorphism;
pub use standard::{free_growth, free_growth_shift, receding_rays, vertex_kernel};
pub(crate) use system::{harmonize, lcm};
pub use system::{FiniteDiagram, IndObject, PeriodCert, Rule, SeqSystem};
