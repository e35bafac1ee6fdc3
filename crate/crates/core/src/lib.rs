//! Exact ind-sheaves of finite-dimensional vector spaces on combinatorial
//! models of locally compact spaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: exact linear algebra over the rationals and prime fields.
//! * [`space`]: finite Alexandrov posets and the combinatorial line.
//! * [`sheaf`]: constructible sheaves as functors on the cell poset.
//! * [`indcat`]: certified sequential ind-objects, Hom, kernels, exactness,
//!   and the functors `iota`, `alpha`, `beta`.
//! * [`sixops`]: tensor, internal hom, inverse and direct images.
//! * [`extend`]: ind-objects represented by a Mayer–Vietoris presheaf.

pub mod error;
pub mod extend;
pub mod indcat;
pub mod linalg;
pub mod random;
pub mod sheaf;
pub mod sixops;
pub mod space;

pub use error::{Error, Result};
