//! `β`, the left adjoint of `α`: `k̃_U = "lim"_{V ⊂⊂ U} k_V` and
//! `k̃_S = "lim"_{V ⊃ S} k_{closure V}`.
//!
//! On a finite poset every open is relatively compact in itself, so `β`
//! agrees with `ι`. On the line the family `{V ⊂⊂ U}` is followed along its
//! cofinal chain `V_n = largest V ⊆ (-n, n)` with closure in `U`, and the
//! family of open neighborhoods of `S` has a least member, the union of the
//! stars of its cells.

use super::functors::{centered_interval, first_valid, iota, tail_onset};
use super::morphism::IndMorphism;
use super::system::{PeriodCert, Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::random::open_hull;
use crate::sheaf::{Presentation, Sheaf, SheafMorphism};
use crate::space::{CellSet, LocallyClosedSet, OpenSet, Space};

/// Candidate onsets tried when certifying a generated family.
const ONSET_TRIES: usize = 6;

/// `k̃_U`.
pub fn beta_open(u: &OpenSet, field: Field) -> Result<SeqSystem> {
    if !u.space().is_line() {
        return Ok(SeqSystem::constant(&Sheaf::constant_on_open(u, field)));
    }
    let level = |n: usize| Ok(Sheaf::constant_on_open(&u.rc_exhaustion(n as i64), field));
    let transition = |n: usize| {
        Sheaf::constant_on_open(&u.rc_exhaustion(n as i64 + 1), field)
            .open_inclusion(&u.rc_exhaustion(n as i64))
    };
    let n0 = tail_onset(Sheaf::constant_on_open(u, field).window());
    let (l, r) = match u.cells().tails() {
        (false, false) => (0, 0),
        (left, right) => (left as i64, right as i64),
    };
    let candidates = (0..ONSET_TRIES).map(|k| {
        let n = n0 + k;
        if (l, r) == (0, 0) {
            PeriodCert::stationary(n)
        } else {
            let (a, b) = (-(n as i64) + 1, n as i64 - 1);
            PeriodCert {
                n0: n,
                p: 1,
                rule: Rule::Stretch { a, b, l, r },
            }
        }
    });
    first_valid(candidates, level, transition)
}

/// The canonical map `k̃_U -> ι k_U`, a monomorphism in the ind-category.
pub fn beta_open_counit(u: &OpenSet, field: Field) -> Result<IndMorphism> {
    let src = beta_open(u, field)?;
    let k_u = Sheaf::constant_on_open(u, field);
    let tgt = iota(&k_u)?;
    if !u.space().is_line() {
        return IndMorphism::generate(&src, &tgt, 0, None, |_| Ok(SheafMorphism::identity(&k_u)));
    }
    IndMorphism::generate(&src, &tgt, 0, None, |n| {
        k_u.restrict_open(&centered_interval(n))?
            .open_inclusion(&u.rc_exhaustion(n as i64))
    })
}

/// Closure of the smallest open neighborhood of `s`.
fn neighborhood_closure(s: &CellSet, space: &Space) -> CellSet {
    let cells: Vec<_> = match space {
        Space::Poset(p) => (0..p.size() as i64).filter(|&c| s.contains(c)).collect(),
        Space::Line => s.listed_cells().collect(),
    };
    open_hull(space, cells).closure()
}

fn check_closed(s: &CellSet, space: &Space) -> Result<()> {
    if !s.is_closed() {
        return Err(Error::InvalidOpenSet("k̃_S needs a closed set".into()));
    }
    if space.is_line() && !s.is_bounded() {
        return Err(Error::UnboundedSupport(
            "k̃_S is built for bounded closed sets".into(),
        ));
    }
    Ok(())
}

/// `k̃_S` for a closed set `S`: the family of neighborhoods has a least
/// member `V`, so the system is constant on `k_{closure V}`.
pub fn beta_closed(s: &CellSet, space: &Space, field: Field) -> Result<SeqSystem> {
    check_closed(s, space)?;
    let z = LocallyClosedSet::from_closed(neighborhood_closure(s, space))?;
    Ok(SeqSystem::constant(&Sheaf::constant_on(&z, field, 1)))
}

/// The canonical map `k̃_S -> ι k_S`, an epimorphism in the ind-category.
pub fn beta_closed_counit(s: &CellSet, space: &Space, field: Field) -> Result<IndMorphism> {
    let src = beta_closed(s, space, field)?;
    let k_s = Sheaf::constant_on(&LocallyClosedSet::from_closed(s.clone())?, field, 1);
    let tgt = iota(&k_s)?;
    let big = src.level(0);
    let offset = tgt.cert().n0;
    IndMorphism::generate(&src, &tgt, offset, None, |_| big.closed_projection(s))
}

/// `β F`. On a poset this is `ι F`; on the line `F` is presented by
/// sheaves `k_U` and `β` is applied to the presentation, using that `β`
/// is right exact.
pub fn beta(f: &Sheaf) -> Result<SeqSystem> {
    if !f.space().is_line() {
        return iota(f);
    }
    let pres = Presentation::of(f)?;
    let field = f.field();
    let gens = pres.generator_opens();
    if pres.relations().is_empty() && gens.len() == 1 {
        return beta_open(&gens[0], field);
    }
    if !f.has_bounded_support() {
        return Err(Error::UnboundedSupport(
            "β needs bounded support or a sheaf k_U".into(),
        ));
    }
    let rels = pres.relation_opens();
    let coeff = pres.coefficients().clone();
    let parts: Vec<SeqSystem> = gens
        .iter()
        .chain(&rels)
        .map(|u| beta_open(u, field))
        .collect::<Result<_>>()?;
    let n0 = parts.iter().map(|s| s.cert().n0).max().unwrap_or(0);
    if parts.iter().any(|s| !s.cert().rule.is_stationary()) {
        return Err(Error::Unsupported(
            "β of a presentation with unbounded opens".into(),
        ));
    }
    let sum = |opens: &[OpenSet], n: usize| -> Result<Sheaf> {
        opens
            .iter()
            .try_fold(Sheaf::zero(f.space(), field), |acc, u| {
                acc.direct_sum(&Sheaf::constant_on_open(&u.rc_exhaustion(n as i64), field))
            })
    };
    // the differential at level n: summand j of the relations maps to
    // summand i of the generators by coeff[i][j] times the inclusion
    let differential = |n: usize| -> Result<SheafMorphism> {
        let (top, bottom) = (sum(&gens, n)?, sum(&rels, n)?);
        SheafMorphism::from_fn(&bottom, &top, |c| {
            let mut m = crate::linalg::LinearMap::zero(field, top.dim(c), bottom.dim(c));
            let (mut row, mut col) = (0, 0);
            let row_of: Vec<Option<usize>> = gens
                .iter()
                .map(|u| {
                    let here = u.rc_exhaustion(n as i64).contains(c);
                    let r = here.then_some(row);
                    row += here as usize;
                    r
                })
                .collect();
            for (j, v) in rels.iter().enumerate() {
                if !v.rc_exhaustion(n as i64).contains(c) {
                    continue;
                }
                for (i, r) in row_of.iter().enumerate() {
                    if let Some(r) = r {
                        m.set(*r, col, coeff.get(i, j).clone());
                    }
                }
                col += 1;
            }
            m
        })
    };
    let level = |n: usize| Ok(differential(n)?.cokernel()?.object);
    let transition = |n: usize| -> Result<SheafMorphism> {
        let (here, there) = (
            differential(n)?.cokernel()?,
            differential(n + 1)?.cokernel()?,
        );
        let (top, next) = (sum(&gens, n)?, sum(&gens, n + 1)?);
        let include = SheafMorphism::from_fn(&top, &next, |c| {
            let (mut src, mut dst) = (0, 0);
            let mut m = crate::linalg::LinearMap::zero(field, next.dim(c), top.dim(c));
            for u in &gens {
                let (a, b) = (
                    u.rc_exhaustion(n as i64).contains(c),
                    u.rc_exhaustion(n as i64 + 1).contains(c),
                );
                if a {
                    m.set(dst, src, field.one());
                }
                src += a as usize;
                dst += b as usize;
            }
            m
        })?;
        let pushed = there.projection.compose(&include)?;
        factor_through_epi(&here.projection, &pushed)
    };
    SeqSystem::generate(PeriodCert::stationary(n0), level, transition)
}

/// The map `h'` with `h' ∘ e = h` for a cellwise onto `e` (when `h`
/// vanishes on the kernel of `e`).
pub(crate) fn factor_through_epi(e: &SheafMorphism, h: &SheafMorphism) -> Result<SheafMorphism> {
    SheafMorphism::from_fn(e.target(), h.target(), |c| {
        let (ec, hc) = (e.component(c), h.component(c));
        ec.transpose()
            .solve_matrix(&hc.transpose())
            .expect("factorization through an epimorphism")
            .transpose()
    })
}
