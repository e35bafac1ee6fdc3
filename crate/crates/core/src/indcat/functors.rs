//! `ι` (sheaves as ind-objects) and `α` (stalkwise colimit).

use super::morphism::IndMorphism;
use super::system::{PeriodCert, Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Subspace};
use crate::sheaf::{Sheaf, SheafMorphism};
use crate::space::{edge, vertex, Cell, OpenSet, Space};

/// The interval `(-n, n)`, empty for `n = 0`.
pub(crate) fn centered_interval(n: usize) -> OpenSet {
    if n == 0 {
        OpenSet::empty(&Space::Line)
    } else {
        OpenSet::interval(-(n as i64), n as i64)
    }
}

/// Smallest `n` with `(-n+2, n-2)` around the window of `f`, so that
/// everything outside `[V(-n+2), V(n-2)]` is tail.
pub(crate) fn tail_onset(window: (Cell, Cell)) -> usize {
    let (lo, hi) = window;
    let need = (2 - lo.div_euclid(2)).max(hi.div_euclid(2) + 3).max(3);
    need as usize
}

/// Validates the first certificate in `candidates` that holds.
pub(crate) fn first_valid(
    candidates: impl IntoIterator<Item = PeriodCert>,
    level: impl Fn(usize) -> Result<Sheaf>,
    transition: impl Fn(usize) -> Result<SheafMorphism>,
) -> Result<SeqSystem> {
    let mut last = Error::InvalidCertificate("no candidate certificate".into());
    for cert in candidates {
        match SeqSystem::generate(cert, &level, &transition) {
            Ok(s) => return Ok(s),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `ι F = "lim" F_{(-n, n)}` on the line, the constant system on a poset.
pub fn iota(f: &Sheaf) -> Result<SeqSystem> {
    if !f.space().is_line() {
        return Ok(SeqSystem::constant(f));
    }
    let n0 = tail_onset(f.window());
    let level = |n: usize| f.restrict_open(&centered_interval(n));
    let transition = |n: usize| {
        f.restrict_open(&centered_interval(n + 1))?
            .open_inclusion(&centered_interval(n))
    };
    let cert = if f.has_bounded_support() {
        PeriodCert::stationary(n0)
    } else {
        let (a, b) = (-(n0 as i64) + 1, n0 as i64 - 1);
        let (l, r) = ((f.tails().0 > 0) as i64, (f.tails().1 > 0) as i64);
        PeriodCert::new(n0, 1, Rule::Stretch { a, b, l, r })?
    };
    SeqSystem::generate(cert, level, transition)
}

/// `ι φ` with components the restrictions of `φ` to `(-n, n)`.
pub fn iota_morphism(phi: &SheafMorphism) -> Result<IndMorphism> {
    let (x, y) = (iota(phi.source())?, iota(phi.target())?);
    if !phi.source().space().is_line() {
        return IndMorphism::generate(&x, &y, 0, None, |_| Ok(phi.clone()));
    }
    IndMorphism::generate(&x, &y, 0, None, |n| {
        phi.restrict_locally_closed(&crate::space::LocallyClosedSet::from_open(
            centered_interval(n),
        ))
    })
}

/// Stable image `im(T^d)` of an endomorphism, `d` the dimension.
fn stable_image(t: &LinearMap) -> Subspace {
    let d = t.domain_dim();
    let mut power = LinearMap::identity(t.field(), d);
    for _ in 0..d {
        power = t.compose(&power).expect("square");
    }
    power.image()
}

/// `α X`, the stalkwise colimit, as a sheaf. Refused when a stalk of the
/// colimit is infinite dimensional or when the colimit has a periodic tail
/// that is not constant.
pub fn alpha(x: &SeqSystem) -> Result<Sheaf> {
    let cert = x.cert();
    match &cert.rule {
        Rule::Grow(d) if !d.is_zero() => Err(Error::Refused(
            "stalkwise colimit is infinite dimensional: the system keeps growing".into(),
        )),
        Rule::Translate(0) | Rule::Grow(_) => Ok(alpha_cocone(x)?.sheaf),
        Rule::Translate(s) => {
            let n = cert.n0;
            let t = x.transition_between(n, n + cert.p);
            let tail = if *s > 0 {
                t.tail_components().0
            } else {
                t.tail_components().1
            };
            let tails = x.level(n).tails();
            let dim = if *s > 0 { tails.0 } else { tails.1 };
            let rank = if dim == 0 {
                0
            } else {
                stable_image(tail).dim()
            };
            Ok(Sheaf::constant(x.space(), x.field(), rank))
        }
        Rule::Stretch { a, b, l, r } => alpha_stretch(x, *a, *b, *l, *r),
    }
}

/// Stalkwise colimit of a stretching system. At the onset every cell of
/// `[V(a), V(b)]` keeps its place; the period map restricted to it is an
/// endomorphism, and cells beyond the cut eventually carry copies of the
/// cells next to it.
fn alpha_stretch(x: &SeqSystem, a: i64, b: i64, l: i64, r: i64) -> Result<Sheaf> {
    let cert = x.cert();
    let n = cert.n0;
    let base = x.level(n);
    let next = x.level(n + cert.p);
    let t = x.transition_between(n, n + cert.p);
    let (ca, cb) = (vertex(a), vertex(b));
    let source = |c: Cell| -> Cell {
        if l > 0 && c < ca {
            if c.rem_euclid(2) == 0 {
                ca
            } else {
                edge(a)
            }
        } else if r > 0 && c > cb {
            if c.rem_euclid(2) == 0 {
                cb
            } else {
                edge(b - 1)
            }
        } else {
            c
        }
    };
    let lo = if l > 0 {
        ca - 2
    } else {
        base.window()
            .0
            .min(next.window().0)
            .min(t.window().0)
            .min(ca)
            - 1
    };
    let hi = if r > 0 {
        cb + 2
    } else {
        base.window()
            .1
            .max(next.window().1)
            .max(t.window().1)
            .max(cb)
            + 1
    };
    let field = x.field();
    // bases of the stable images, as column matrices in the stalks of the onset level
    let mut bases: Vec<(Cell, LinearMap)> = Vec::new();
    for c in lo..=hi {
        let s = source(c);
        let img = stable_image(&t.component(s));
        let basis = img.inclusion();
        bases.push((c, basis));
    }
    let idx = |c: Cell| (c.clamp(lo, hi) - lo) as usize;
    // copied edges use the image of the vertex basis so that the tail is constant
    let transported = |bases: &[(Cell, LinearMap)], v: Cell, e: Cell| -> Result<LinearMap> {
        let vb = &bases[idx(v)].1;
        let g = base.gen(v, e).compose(vb)?;
        if g.rank() != vb.domain_dim() || g.rank() != bases[idx(e)].1.domain_dim() {
            return Err(Error::Refused(
                "stalkwise colimit has a periodic tail that is not constant".into(),
            ));
        }
        Ok(g)
    };
    if l > 0 {
        let g = transported(&bases, ca, edge(a))?;
        for c in [ca - 1, ca + 1] {
            bases[idx(c)].1 = g.clone();
        }
    }
    if r > 0 {
        let g = transported(&bases, cb, edge(b - 1))?;
        for c in [cb - 1, cb + 1] {
            bases[idx(c)].1 = g.clone();
        }
    }
    let basis_of = |c: Cell| -> LinearMap { bases[idx(c)].1.clone() };
    Sheaf::from_fn(
        x.space(),
        field,
        (lo, hi),
        |c| basis_of(c).domain_dim(),
        |c, d| {
            let image = base
                .gen(source(c), source(d))
                .compose(&basis_of(c))
                .expect("shapes");
            basis_of(d)
                .solve_matrix(&image)
                .expect("generization preserves stable images")
        },
    )
}

/// `α X` for a system that is stationary from its onset, with the colimit
/// cocone.
#[derive(Clone, Debug)]
pub struct AlphaCocone {
    pub sheaf: Sheaf,
    system: SeqSystem,
    stage: usize,
    /// `X_N -> α X`.
    base: SheafMorphism,
    /// Inverse of the period map on `α X`.
    period_inverse: SheafMorphism,
}

/// The colimit of a stationary system: the stable image of the period map
/// `T` of `X_{n0}`, with cocone `T^d` at the onset.
pub fn alpha_cocone(x: &SeqSystem) -> Result<AlphaCocone> {
    let cert = x.cert();
    if let Rule::Grow(d) = &cert.rule {
        if !d.is_zero() {
            return Err(Error::Refused(
                "stalkwise colimit is infinite dimensional".into(),
            ));
        }
    } else if cert.rule != Rule::Translate(0) {
        return Err(Error::Unsupported(
            "colimit cocones are built for stationary systems".into(),
        ));
    }
    let n = cert.n0;
    let xn = x.level(n);
    let t = x.transition_between(n, n + cert.p);
    let d = (xn.window().0..=xn.window().1)
        .map(|c| xn.dim(c))
        .max()
        .unwrap_or(0)
        .max(xn.tails().0)
        .max(xn.tails().1);
    let power = (0..d).try_fold(SheafMorphism::identity(&xn), |acc, _| t.compose(&acc))?;
    let image = power.image()?;
    let restricted = image
        .inclusion
        .factor_through_mono(&t.compose(&image.inclusion)?)
        .expect("the period map preserves its stable image");
    let period_inverse = restricted.inverse().map_err(|_| {
        Error::InvalidCertificate("period map is not invertible on its stable image".into())
    })?;
    Ok(AlphaCocone {
        sheaf: image.object,
        system: x.clone(),
        stage: n,
        base: image.coimage_map,
        period_inverse,
    })
}

impl AlphaCocone {
    /// The cocone map `X_n -> α X`.
    pub fn cocone(&self, n: usize) -> Result<SheafMorphism> {
        let p = self.system.cert().p;
        let k = n.saturating_sub(self.stage).div_ceil(p);
        let m = self.stage + k * p;
        let mut c = self.base.clone();
        for _ in 0..k {
            c = self.period_inverse.compose(&c)?;
        }
        c.compose(&self.system.transition_between(n, m))
    }
}

/// `α u: α X -> α Y` for stationary systems, determined by
/// `α u ∘ c_n = c_{n+δ} ∘ u_n` with the cocone map `c_n` onto.
pub fn alpha_morphism(u: &IndMorphism) -> Result<SheafMorphism> {
    let ax = alpha_cocone(u.source())?;
    let ay = alpha_cocone(u.target())?;
    let n = ax.stage.max(u.cert().n0);
    let cx = ax.cocone(n)?;
    let rhs = ay.cocone(n + u.offset())?.compose(&u.component(n))?;
    SheafMorphism::from_fn(&ax.sheaf, &ay.sheaf, |c| {
        let (cc, rc) = (cx.component(c), rhs.component(c));
        cc.transpose()
            .solve_matrix(&rc.transpose())
            .expect("cocone maps are onto")
            .transpose()
    })
}

/// The adjunction `Hom(α X, G) ≅ Hom(X, ι G)` from left to right: `g`
/// goes to the morphism with components `g ∘ c_n`.
pub fn alpha_transpose(g: &SheafMorphism, x: &SeqSystem) -> Result<IndMorphism> {
    let cocone = alpha_cocone(x)?;
    if !g.source().same_as(&cocone.sheaf) {
        return Err(Error::NotAMorphism("expected a morphism out of α X".into()));
    }
    let target = iota(g.target())?;
    if !target.cert().rule.is_stationary() {
        return Err(Error::Unsupported(
            "transpose into ι G needs a stationary ι G".into(),
        ));
    }
    let offset = target.cert().n0;
    IndMorphism::generate(x, &target, offset, None, |n| g.compose(&cocone.cocone(n)?))
}

/// The adjunction `Hom(ι F, X) ≅ Hom(F, α X)` for a constant `ι F`:
/// `φ` goes to `c_{n+δ} ∘ φ_n`, independent of `n`.
pub fn iota_transpose(phi: &IndMorphism) -> Result<SheafMorphism> {
    let cocone = alpha_cocone(phi.target())?;
    let n = phi.cert().n0;
    cocone.cocone(n + phi.offset())?.compose(&phi.component(n))
}
