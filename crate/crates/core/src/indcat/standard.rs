//! Standard ind-objects used throughout: the growing system `"lim" kⁿ`
//! on a point, the receding rays `"lim" k_{[n, ∞)}` on the line and the
//! kernel `N_a` of `k̃_{a} -> k_{a}`.

use super::abelian::kernel;
use super::beta::beta_closed_counit;
use super::morphism::IndMorphism;
use super::system::{PeriodCert, Rule, SeqSystem};
use crate::error::Result;
use crate::linalg::{Field, LinearMap};
use crate::sheaf::{Sheaf, SheafMorphism};
use crate::space::{vertex, CellSet, LocallyClosedSet, Space};

/// `"lim" kⁿ` on a point with the inclusions `kⁿ -> kⁿ⁺¹` onto the first
/// coordinates. Every `Hom(k, -)` colimit is infinite and no transition is
/// eventually invertible.
pub fn free_growth(field: Field) -> Result<SeqSystem> {
    let pt = Space::point();
    let k = Sheaf::constant(&pt, field, 1);
    let level = |n: usize| Ok(Sheaf::constant(&pt, field, n));
    let transition = |n: usize| {
        let map = LinearMap::from_columns(
            field,
            n + 1,
            &(0..n)
                .map(|i| {
                    (0..=n)
                        .map(|j| if i == j { field.one() } else { field.zero() })
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        SheafMorphism::from_fn(&level(n)?, &level(n + 1)?, |_| map.clone())
    };
    SeqSystem::generate(PeriodCert::new(0, 1, Rule::Grow(k))?, level, transition)
}

/// The endomorphism of [`free_growth`] of offset one whose components are
/// the transitions. It is the identity in the ind-category.
pub fn free_growth_shift(field: Field) -> Result<IndMorphism> {
    let x = free_growth(field)?;
    let id = SheafMorphism::identity(&Sheaf::constant(&Space::point(), field, 1));
    IndMorphism::generate(&x, &x, 1, Some(id), |n| Ok(x.transition(n)))
}

/// `"lim" k_{[n, ∞)}` with the restriction maps `k_{[n,∞)} -> k_{[n+1,∞)}`.
pub fn receding_rays(field: Field) -> Result<SeqSystem> {
    let ray =
        |n: usize| Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(n as i64), field, 1);
    let transition = |n: usize| {
        ray(n).closed_projection(LocallyClosedSet::closed_right_ray(n as i64 + 1).closed_part())
    };
    SeqSystem::generate(
        PeriodCert::new(0, 1, Rule::Translate(1))?,
        |n| Ok(ray(n)),
        transition,
    )
}

/// `N_a = ker(k̃_{a} -> k_{a})` for the vertex `a` of the line, with
/// its inclusion into `k̃_{a}`.
pub fn vertex_kernel(a: i64, field: Field) -> Result<(SeqSystem, IndMorphism)> {
    let s = CellSet::from_cells(&Space::Line, [vertex(a)])?;
    let k = kernel(&beta_closed_counit(&s, &Space::Line, field)?)?;
    Ok((k.object, k.inclusion))
}
