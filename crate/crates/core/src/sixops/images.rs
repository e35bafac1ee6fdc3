//! `f⁻¹`, `f_*` and `f_!!` on ind-objects, and the comparison
//! `f_!! ι F -> ι f_! F`.
//!
//! For maps of the combinatorial line to a poset the comparison is always
//! an isomorphism in degree zero; the open embeddings, which are not cell
//! maps here, provide the examples where it is not.

use super::certify::certify;
use super::restrict::restrict;
use crate::error::{Error, Result};
use crate::indcat::{alpha, centered_interval, iota, IndMorphism, PeriodCert, Rule, SeqSystem};
use crate::sheaf::{
    direct_image, inverse_image, inverse_image_morphism, proper_direct_image, pushforward_morphism,
    Sheaf, SheafMorphism,
};
use crate::space::{CellMap, LocallyClosedSet, MapKind, OpenSet, Space};

fn check_side(s: &SeqSystem, space: &Space) -> Result<()> {
    if s.space() != space {
        return Err(Error::SpaceMismatch(
            "ind-object does not live on the expected side of the map".into(),
        ));
    }
    Ok(())
}

/// The certificate of `x` carried along a levelwise functor `g` that is
/// additive and commutes with translations of the line.
fn carried(x: &SeqSystem, f: &CellMap, g: impl Fn(&Sheaf) -> Result<Sheaf>) -> Result<PeriodCert> {
    let c = x.cert();
    let rule = match (&c.rule, f.kind()) {
        (Rule::Grow(d), _) if !d.is_zero() => Rule::Grow(g(d)?),
        (r, _) if r.is_stationary() => Rule::Translate(0),
        (Rule::Translate(t), MapKind::LineShift(_)) => Rule::Translate(*t),
        (Rule::Stretch { a, b, l, r }, MapKind::LineShift(s)) => Rule::Stretch {
            a: a + s,
            b: b + s,
            l: *l,
            r: *r,
        },
        _ => Rule::Translate(0),
    };
    PeriodCert::new(c.n0, c.p, rule)
}

/// `f⁻¹ Y = "lim" (f⁻¹ Y_n)_{U_n}` with `U_n ⊂⊂` the source; the cut is
/// only needed when the source is the line and the target is not.
pub fn inverse_image_ind(f: &CellMap, y: &SeqSystem) -> Result<SeqSystem> {
    check_side(y, f.target())?;
    match f.kind() {
        MapKind::LineConstant(_) => {
            let cut = |n: usize| LocallyClosedSet::from_open(centered_interval(n));
            let level =
                |n: usize| inverse_image(f, &y.level(n))?.restrict_open(&centered_interval(n));
            let transition = |n: usize| {
                let moved = inverse_image_morphism(f, &y.transition(n))?
                    .restrict_locally_closed(&cut(n))?;
                level(n + 1)?
                    .open_inclusion(&centered_interval(n))?
                    .compose(&moved)
            };
            let c = y.cert();
            if let Rule::Grow(d) = &c.rule {
                if !d.is_zero() {
                    return Err(Error::Unsupported(
                        "inverse image of a growing system onto the line".into(),
                    ));
                }
            }
            let n0 = c.n0.max(3);
            // the pulled back levels are constant, so both ends grow
            let grow = inverse_image(f, &y.level(n0))?.tails().0 > 0;
            let (a, b, step) = (-(n0 as i64) + 1, n0 as i64 - 1, grow as i64 * c.p as i64);
            let hint = PeriodCert::new(
                n0,
                c.p,
                Rule::Stretch {
                    a,
                    b,
                    l: step,
                    r: step,
                },
            )?;
            certify(&hint, level, transition)
        }
        _ => {
            let hint = carried(y, f, |d| inverse_image(f, d))?;
            certify(
                &hint,
                |n| inverse_image(f, &y.level(n)),
                |n| inverse_image_morphism(f, &y.transition(n)),
            )
        }
    }
}

/// `f⁻¹ φ`.
pub fn inverse_image_ind_morphism(f: &CellMap, phi: &IndMorphism) -> Result<IndMorphism> {
    let (x, y) = (
        inverse_image_ind(f, phi.source())?,
        inverse_image_ind(f, phi.target())?,
    );
    let d = phi.offset();
    let block = phi
        .block()
        .map(|b| inverse_image_morphism(f, b))
        .transpose()?;
    IndMorphism::generate(&x, &y, d, block, |n| {
        let moved = inverse_image_morphism(f, &phi.component(n))?;
        match f.kind() {
            MapKind::LineConstant(_) => {
                let cut = moved
                    .restrict_locally_closed(&LocallyClosedSet::from_open(centered_interval(n)))?;
                y.level(n + d)
                    .open_inclusion(&centered_interval(n))?
                    .compose(&cut)
            }
            _ => Ok(moved),
        }
    })
}

/// `f_* X`. From a poset every compact set is contained in the whole
/// space, so the pro-system is constant and `f_*` is levelwise. From the
/// line the pro-system over the exhaustion `[-n, n]` stabilizes to the
/// sections of `α X`, and `f_* X = ι f_* α X`; it is refused when `α X` is.
pub fn direct_image_ind(f: &CellMap, x: &SeqSystem) -> Result<SeqSystem> {
    check_side(x, f.source())?;
    match f.kind() {
        MapKind::LineConstant(_) => {
            let a = alpha(x)
                .map_err(|e| Error::Refused(format!("the pro-system does not stabilize: {e}")))?;
            iota(&direct_image(f, &a)?)
        }
        _ => {
            let hint = carried(x, f, |d| direct_image(f, d))?;
            certify(
                &hint,
                |n| direct_image(f, &x.level(n)),
                |n| pushforward_morphism(f, &x.transition(n), false),
            )
        }
    }
}

/// `f_!! X = "lim" f_! X_n`.
pub fn proper_direct_image_ind(f: &CellMap, x: &SeqSystem) -> Result<SeqSystem> {
    check_side(x, f.source())?;
    let hint = carried(x, f, |d| proper_direct_image(f, d))?;
    certify(
        &hint,
        |n| proper_direct_image(f, &x.level(n)),
        |n| pushforward_morphism(f, &x.transition(n), true),
    )
}

/// The natural map `f_!! ι F -> ι f_! F`: the component at `n` is `f_!` of
/// the inclusion `F_{U_n} -> F`, which lands in a level of `ι f_! F`.
pub fn proper_comparison(f: &CellMap, sheaf: &Sheaf) -> Result<IndMorphism> {
    let src = proper_direct_image_ind(f, &iota(sheaf)?)?;
    let pushed = proper_direct_image(f, sheaf)?;
    let tgt = iota(&pushed)?;
    let reach = match f.kind() {
        MapKind::LineShift(s) => s.unsigned_abs() as usize,
        _ => 0,
    };
    let offset = tgt.cert().n0 + reach;
    let include = |n: usize| -> Result<SheafMorphism> {
        if sheaf.space().is_line() {
            sheaf.open_inclusion(&centered_interval(n))
        } else {
            Ok(SheafMorphism::identity(sheaf))
        }
    };
    IndMorphism::generate(&src, &tgt, offset, None, |n| {
        let whole = pushforward_morphism(f, &include(n)?, true)?;
        let into = if pushed.space().is_line() {
            pushed.open_inclusion(&centered_interval(n + offset))?
        } else {
            SheafMorphism::identity(&pushed)
        };
        into.factor_through_mono(&whole)
            .ok_or_else(|| Error::NotAMorphism("comparison does not land in the truncation".into()))
    })
}

/// The comparison `j_!! ι_U (F|_U) -> ι j_! (F|_U)` for the inclusion `j` of
/// an open set `U`, with both sides kept on the ambient space:
/// `"lim"_{V ⊂⊂ U} F_V -> ι(F_U)`.
pub fn open_embedding_comparison(u: &OpenSet, sheaf: &Sheaf) -> Result<IndMorphism> {
    let src = restrict(&iota(sheaf)?, u)?;
    let tgt = iota(&sheaf.restrict_open(u)?)?;
    IndMorphism::generate(&src, &tgt, 0, None, |n| {
        tgt.level(n).open_inclusion(&u.rc_exhaustion(n as i64))
    })
}
