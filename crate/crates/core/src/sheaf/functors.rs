//! Inverse image, direct image and proper direct image along cell maps.

use std::collections::BTreeSet;

use super::model::model_range;
use super::{Sections, Sheaf, SheafMorphism};
use crate::error::{Error, Result};
use crate::linalg::LinearMap;
use crate::space::{Cell, CellMap, MapKind, OpenSet, Space};

fn check_source(f: &CellMap, s: &Sheaf, target_side: bool) -> Result<()> {
    let expected = if target_side { f.target() } else { f.source() };
    if s.space() != expected {
        return Err(Error::SpaceMismatch(
            "sheaf does not live on the expected side of the map".into(),
        ));
    }
    Ok(())
}

/// Range of target cells that can receive nonzero pushforward stalks.
fn image_range(f: &CellMap, source_window: (Cell, Cell)) -> (Cell, Cell) {
    match (f.source(), f.target()) {
        (Space::Poset(p), Space::Line) => {
            let imgs: Vec<Cell> = (0..p.size() as Cell).map(|c| f.apply(c)).collect();
            let lo = imgs.iter().min().copied().unwrap_or(0);
            let hi = imgs.iter().max().copied().unwrap_or(0);
            model_range(&Space::Line, &[(lo, hi)])
        }
        (_, t) => model_range(t, &[source_window]),
    }
}

/// `f⁻¹G`: the stalk at `c` is `G_{f(c)}`.
pub fn inverse_image(f: &CellMap, g: &Sheaf) -> Result<Sheaf> {
    check_source(f, g, true)?;
    match f.kind() {
        MapKind::Table(_) => Sheaf::from_fn(
            f.source(),
            g.field(),
            (0, 0),
            |c| g.dim(f.apply(c)),
            |c, d| g.map_between(f.apply(c), f.apply(d)),
        ),
        MapKind::LineConstant(t) => Ok(Sheaf::constant(f.source(), g.field(), g.dim(*t))),
        MapKind::LineShift(s) => g.shift(-s),
    }
}

/// `f⁻¹` on morphisms.
pub fn inverse_image_morphism(f: &CellMap, m: &SheafMorphism) -> Result<SheafMorphism> {
    let s = inverse_image(f, m.source())?;
    let t = inverse_image(f, m.target())?;
    match f.kind() {
        MapKind::LineShift(sh) => m.shift(-sh),
        _ => SheafMorphism::from_fn(&s, &t, |c| m.component(f.apply(c))),
    }
}

/// Sections of `F` over `f⁻¹(star y)`, optionally with `f`-proper support.
fn pushforward_stalk(
    f: &CellMap,
    s: &Sheaf,
    y: Cell,
    proper: bool,
    extra: (Cell, Cell),
) -> Result<Sections> {
    let star = f.target().star(y);
    let pre = f.preimage(&star)?;
    if !proper {
        return s.sections_in_model(&pre, extra, false);
    }
    match f.kind() {
        MapKind::LineConstant(t) => {
            let secs = s.sections_in_model(&pre, extra, true)?;
            if *t == y {
                Ok(secs)
            } else {
                Ok(secs.supported_in(|_| false))
            }
        }
        MapKind::LineShift(_) => s.sections_in_model(&pre, extra, false),
        MapKind::Table(_) => {
            let keep = proper_support(f, &pre, &star);
            Ok(s.sections_in_model(&pre, extra, false)?
                .supported_in(|c| keep.contains(&c)))
        }
    }
}

/// Largest down-closed `S ⊆ W = f⁻¹(V)` such that `f|S : S -> V` is closed:
/// for `x ∈ S` and `y ∈ V` with `y <= f(x)` some `x' <= x` in `S` has
/// `f(x') = y`. Admissible sets are closed under union, so the largest one
/// is the greatest fixed point of removing violations.
fn proper_support(f: &CellMap, w: &OpenSet, v: &OpenSet) -> BTreeSet<Cell> {
    let Space::Poset(p) = f.source() else {
        unreachable!("table maps start at a poset")
    };
    let n = p.size() as Cell;
    let targets: Vec<Cell> = match f.target() {
        Space::Poset(q) => (0..q.size() as Cell).filter(|&y| v.contains(y)).collect(),
        Space::Line => {
            let lo = (0..n).map(|c| f.apply(c)).min().unwrap_or(0) - 2;
            let hi = (0..n).map(|c| f.apply(c)).max().unwrap_or(0) + 2;
            (lo..=hi).filter(|&y| v.contains(y)).collect()
        }
    };
    let mut s: BTreeSet<Cell> = (0..n).filter(|&c| w.contains(c)).collect();
    loop {
        let bad = s.iter().copied().find(|&x| {
            targets.iter().any(|&y| {
                f.target().leq(y, f.apply(x))
                    && !s
                        .iter()
                        .any(|&x2| p.leq(x2 as usize, x as usize) && f.apply(x2) == y)
            })
        });
        match bad {
            None => return s,
            Some(x) => s.retain(|&z| !p.leq(x as usize, z as usize)),
        }
    }
}

fn pushforward(f: &CellMap, s: &Sheaf, proper: bool) -> Result<Sheaf> {
    check_source(f, s, false)?;
    if let MapKind::LineShift(sh) = f.kind() {
        return s.shift(*sh);
    }
    let field = s.field();
    let range = image_range(f, s.window());
    let stalk = |y: Cell| pushforward_stalk(f, s, y, proper, s.window());
    // evaluate every stalk once so failures surface as errors
    let cells: Vec<Cell> = match f.target() {
        Space::Poset(q) => (0..q.size() as Cell).collect(),
        Space::Line => (range.0..=range.1).collect(),
    };
    let mut stalks = std::collections::BTreeMap::new();
    for &y in &cells {
        stalks.insert(y, stalk(y)?);
    }
    let get = |y: Cell| {
        stalks
            .get(&y)
            .cloned()
            .map(Ok)
            .unwrap_or_else(|| stalk(y))
            .unwrap()
    };
    Sheaf::from_fn(
        f.target(),
        field,
        range,
        |y| get(y).dim(),
        |y, y2| {
            get(y)
                .restriction_to(&get(y2))
                .expect("star(y2) lies in star(y)")
        },
    )
}

/// `f_*F`: the stalk at `y` is `F(f⁻¹(star y))`.
pub fn direct_image(f: &CellMap, s: &Sheaf) -> Result<Sheaf> {
    pushforward(f, s, false)
}

/// `f_!F`: sections over `f⁻¹(star y)` whose support is bounded and proper
/// over `star y`.
pub fn proper_direct_image(f: &CellMap, s: &Sheaf) -> Result<Sheaf> {
    pushforward(f, s, true)
}

/// Induced map on direct images (proper or not).
pub fn pushforward_morphism(f: &CellMap, m: &SheafMorphism, proper: bool) -> Result<SheafMorphism> {
    if let MapKind::LineShift(sh) = f.kind() {
        return m.shift(*sh);
    }
    let (src, tgt) = (m.source(), m.target());
    let s = pushforward(f, src, proper)?;
    let t = pushforward(f, tgt, proper)?;
    let field = s.field();
    let window = (
        src.window().0.min(tgt.window().0),
        src.window().1.max(tgt.window().1),
    );
    let range = image_range(f, window);
    SheafMorphism::from_fn_range(&s, &t, range, |y| {
        let a = pushforward_stalk(f, src, y, proper, src.window()).unwrap();
        let b = pushforward_stalk(f, tgt, y, proper, tgt.window()).unwrap();
        let cols: Vec<_> = a
            .subspace()
            .basis()
            .iter()
            .map(|v| {
                let mut w = Vec::new();
                for &c in b.cells() {
                    w.extend(m.component(c).apply(&a.value_at(v, c, src.dim(c))));
                }
                b.subspace()
                    .coordinates(&w)
                    .expect("morphisms preserve sections")
            })
            .collect();
        LinearMap::from_columns(field, b.dim(), &cols)
    })
}

/// The natural monomorphism `f_!F -> f_*F`.
pub fn proper_inclusion(f: &CellMap, s: &Sheaf) -> Result<SheafMorphism> {
    let proper = proper_direct_image(f, s)?;
    let direct = direct_image(f, s)?;
    if let MapKind::LineShift(_) = f.kind() {
        return Ok(SheafMorphism::identity(&direct));
    }
    let range = image_range(f, s.window());
    SheafMorphism::from_fn_range(&proper, &direct, range, |y| {
        let a = pushforward_stalk(f, s, y, true, s.window()).unwrap();
        let b = pushforward_stalk(f, s, y, false, s.window()).unwrap();
        let cols: Vec<_> = a
            .subspace()
            .basis()
            .iter()
            .map(|v| b.subspace().coordinates(v).unwrap())
            .collect();
        LinearMap::from_columns(s.field(), b.dim(), &cols)
    })
}
