//! `colim_n Hom(Y, X_n)` for a sheaf `Y` and a certified system `X`.
//!
//! The certificate gives a stage `N` from which the system, seen from `Y`,
//! repeats every period: `Hom(Y, X_{N+kp})` is identified with `Hom(Y, X_N)`
//! and the period map becomes a fixed endomorphism `S`. The colimit is then
//! `Hom(Y, X_N) / ker S^d` with `d = dim Hom(Y, X_N)`, and `ker S^d` is the
//! kernel of the honest composite `Hom(Y, X_N) -> Hom(Y, X_{N+dp})`.
//!
//! Stages by rule:
//! - in place (`Translate(0)`, growth by zero): `N = n0`;
//! - growth by `D`: infinite as soon as `Hom(Y, D) != 0`, since every copy
//!   of `D` survives with identity transitions;
//! - translation: once every level of a period lies beyond the window of
//!   `Y` (with zero tail on the trailing side), `Y` only meets the levels in
//!   one of its constant tails, which is translation invariant;
//! - stretching: once the inserted copies reach past the window of `Y`,
//!   cutting further out gives the same levels, and the cells meeting `Y`
//!   no longer change. If `Y` has a nonzero tail on a growing side, the
//!   copied generization map must be invertible so that morphisms on the
//!   copies are forced.
//!
//! When none of this applies the answer is computed at a truncation level
//! and tagged as such.

use std::fmt;

use super::system::{Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Scalar, Subspace};
use crate::sheaf::{HomSpace, Sheaf, SheafMorphism};
use crate::space::{edge, vertex, Cell};

/// Default truncation level for answers no certificate decides.
pub const DEFAULT_TRUNCATION: usize = 16;

/// Cells kept between a probe window and anything that moves.
const GAP: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl Dim {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dim::Finite(d) => Some(d),
            Dim::Infinite => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Infinite => write!(f, "inf"),
        }
    }
}

/// How an answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// A finite computation, justified by a certificate where one is used.
    Exact,
    /// An infinite answer proven from a certificate.
    Certified,
    /// Computed at the given level without a proof of stability.
    Truncated(usize),
}

impl Tag {
    pub fn is_truncated(self) -> bool {
        matches!(self, Tag::Truncated(_))
    }

    /// The weaker of two tags.
    pub fn meet(self, other: Tag) -> Tag {
        match (self, other) {
            (Tag::Truncated(a), Tag::Truncated(b)) => Tag::Truncated(a.max(b)),
            (Tag::Truncated(a), _) | (_, Tag::Truncated(a)) => Tag::Truncated(a),
            (Tag::Certified, _) | (_, Tag::Certified) => Tag::Certified,
            _ => Tag::Exact,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Exact => write!(f, "exact"),
            Tag::Certified => write!(f, "certified"),
            Tag::Truncated(n) => write!(f, "truncated@{n}"),
        }
    }
}

/// A yes/no answer with the strength of its justification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub tag: Tag,
}

impl Verdict {
    pub fn exact(holds: bool) -> Verdict {
        Verdict {
            holds,
            tag: Tag::Exact,
        }
    }

    /// Conjunction; the tag is the weaker one, except that a definite
    /// failure stays definite.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self.holds, other.holds) {
            (false, _) if !self.tag.is_truncated() => self,
            (_, false) if !other.tag.is_truncated() => other,
            _ => Verdict {
                holds: self.holds && other.holds,
                tag: self.tag.meet(other.tag),
            },
        }
    }

    pub fn not(self) -> Verdict {
        Verdict {
            holds: !self.holds,
            ..self
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.holds, self.tag)
    }
}

/// A stage from which the system repeats as seen by a probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stage {
    Stable(usize),
    Infinite(usize),
    Unknown(usize),
}

impl Stage {
    pub(crate) fn level(self) -> usize {
        match self {
            Stage::Stable(n) | Stage::Infinite(n) | Stage::Unknown(n) => n,
        }
    }
}

/// First level `>= min` in the residue class of `base` modulo `p`, not
/// below `base`.
fn align(base: usize, p: usize, min: usize) -> usize {
    if min <= base {
        base
    } else {
        base + (min - base).div_ceil(p) * p
    }
}

/// Vertex index of the cell `c` rounded down.
fn vertex_floor(c: Cell) -> i64 {
    c.div_euclid(2)
}

/// Stage for the probe `y`, at least `min`.
pub(crate) fn stage(sys: &SeqSystem, y: &Sheaf, min: usize, trunc: usize) -> Result<Stage> {
    let cert = sys.cert();
    let (n0, p) = (cert.n0, cert.p);
    let unknown = || Stage::Unknown(align(n0, p, min.max(trunc)));
    match &cert.rule {
        Rule::Translate(0) => Ok(Stage::Stable(align(n0, p, min))),
        Rule::Grow(d) => {
            if y.hom_space(d)?.dim() > 0 {
                Ok(Stage::Infinite(align(n0, p, min)))
            } else {
                Ok(Stage::Stable(align(n0, p, min)))
            }
        }
        Rule::Translate(s) => {
            let (ylo, yhi) = y.window();
            let mut k = 0i64;
            for j in 0..p {
                let lv = sys.level(n0 + j);
                let (lo, hi) = lv.window();
                let (lead_tail, need) = if *s > 0 {
                    (lv.tails().0, yhi + GAP - lo)
                } else {
                    (lv.tails().1, hi - (ylo - GAP))
                };
                if lead_tail != 0 {
                    return Ok(unknown());
                }
                if need > 0 {
                    k = k.max((need as u64).div_ceil(2 * s.unsigned_abs()) as i64 + 1);
                }
            }
            Ok(Stage::Stable(align(n0 + k as usize * p, p, min)))
        }
        Rule::Stretch { a, b, l, r } => {
            let (ylo, yhi) = y.window();
            let a2 = (*a).min(vertex_floor(ylo) - GAP);
            let b2 = (*b).max(vertex_floor(yhi) + GAP);
            let periods = |dist: i64, step: i64| {
                if dist <= 0 || step == 0 {
                    0
                } else {
                    (dist as u64).div_ceil(step as u64) as i64
                }
            };
            let k = periods(a - a2, *l).max(periods(b2 - b, *r));
            let n = align(n0 + k as usize * p, p, min);
            let lv = sys.level(n);
            let (ytl, ytr) = y.tails();
            if (*l > 0 && ytl > 0 && !lv.gen(vertex(*a), edge(*a)).is_invertible())
                || (*r > 0 && ytr > 0 && !lv.gen(vertex(*b), edge(*b - 1)).is_invertible())
            {
                return Ok(unknown());
            }
            Ok(Stage::Stable(n))
        }
    }
}

/// `colim_n Hom(Y, X_n)`, represented as a quotient of `Hom(Y, X_N)`.
#[derive(Clone, Debug)]
pub struct ColimSpace {
    dim: Dim,
    tag: Tag,
    stage: usize,
    period: usize,
    hom: HomSpace,
    kernel: Subspace,
    quotient: LinearMap,
}

impl ColimSpace {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    /// The level `N` whose Hom space represents the colimit.
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// `Hom(Y, X_N)`.
    pub fn hom(&self) -> &HomSpace {
        &self.hom
    }

    /// Classes dying in the colimit, in coordinates of [`Self::hom`].
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Projection from coordinates of [`Self::hom`] onto `Hom(Y, X_N)`
    /// modulo the classes dying later. When the colimit is infinite this is
    /// the image of stage `N` only.
    pub fn quotient(&self) -> &LinearMap {
        &self.quotient
    }

    /// Class of a morphism `Y -> X_N` in the colimit.
    pub fn class_of(&self, m: &SheafMorphism) -> Result<Vec<Scalar>> {
        let coords = self.hom.coordinates(m)?;
        Ok(self.quotient.apply(&coords))
    }

    /// Whether `m: Y -> X_N` becomes zero in the colimit.
    pub fn vanishes(&self, m: &SheafMorphism) -> Result<bool> {
        Ok(self.kernel.contains(&self.hom.coordinates(m)?))
    }

    /// A morphism `Y -> X_N` representing the colimit class `coords`.
    pub fn representative(&self, coords: &[Scalar]) -> SheafMorphism {
        let lift = self.quotient.solve(coords).expect("quotient maps are onto");
        self.hom.element(&lift)
    }
}

impl ColimSpace {
    /// Matrix taking classes of `self` to classes of `other`, a
    /// presentation of the same colimit at a later stage.
    pub fn transfer(&self, other: &ColimSpace, x: &SeqSystem) -> Result<LinearMap> {
        if other.stage < self.stage {
            return Err(Error::Unsupported("transfer goes to a later stage".into()));
        }
        let field = x.field();
        let d = self.quotient.codomain_dim();
        let push = x.transition_between(self.stage, other.stage);
        let cols = (0..d)
            .map(|i| {
                let mut e = vec![field.zero(); d];
                e[i] = field.one();
                other.class_of(&push.compose(&self.representative(&e))?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMap::from_columns(
            field,
            other.quotient.codomain_dim(),
            &cols,
        ))
    }

    /// Class of `m: Y -> X_k` for any `k`, in the coordinates of `self`.
    pub fn class_at(
        &self,
        m: &SheafMorphism,
        k: usize,
        x: &SeqSystem,
        trunc: usize,
    ) -> Result<Vec<Scalar>> {
        if k <= self.stage {
            return self.class_of(&x.transition_between(k, self.stage).compose(m)?);
        }
        let later = hom_from_sheaf_with(m.source(), x, k, trunc)?;
        let here = later.class_of(&x.transition_between(k, later.stage()).compose(m)?)?;
        self.transfer(&later, x)?
            .solve(&here)
            .ok_or_else(|| Error::Unsupported("class not reached from the earlier stage".into()))
    }
}

impl fmt::Display for ColimSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim = {} [{}]", self.dim, self.tag)
    }
}

/// `colim_n Hom(Y, X_n)` with the default truncation.
pub fn hom_from_sheaf(y: &Sheaf, x: &SeqSystem) -> Result<ColimSpace> {
    hom_from_sheaf_with(y, x, 0, DEFAULT_TRUNCATION)
}

/// `colim_n Hom(Y, X_n)` represented at a stage `>= min`.
pub fn hom_from_sheaf_with(
    y: &Sheaf,
    x: &SeqSystem,
    min: usize,
    trunc: usize,
) -> Result<ColimSpace> {
    if y.space() != x.space() || y.field() != x.field() {
        return Err(Error::SpaceMismatch(
            "probe and system live on different spaces".into(),
        ));
    }
    let st = stage(x, y, min, trunc)?;
    let n = st.level();
    let p = x.cert().p;
    let hom = y.hom_space(&x.level(n))?;
    let d = hom.dim();
    let far = n + d.max(1) * p;
    let onto = y.hom_space(&x.level(far))?;
    let push = hom.postcompose_map(&x.transition_between(n, far), &onto)?;
    let kernel = push.kernel();
    let quotient = kernel.quotient_projection();
    let (dim, tag) = match st {
        Stage::Unknown(level) => (Dim::Finite(d - kernel.dim()), Tag::Truncated(level)),
        Stage::Infinite(_) => (Dim::Infinite, Tag::Certified),
        Stage::Stable(_) => (Dim::Finite(d - kernel.dim()), Tag::Exact),
    };
    Ok(ColimSpace {
        dim,
        tag,
        stage: n,
        period: p,
        hom,
        kernel,
        quotient,
    })
}
