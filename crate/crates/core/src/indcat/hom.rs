//! `Hom(X, Y) = lim_i colim_j Hom(X_i, Y_j)` between ind-objects.
//!
//! For a source that is stationary from `n0` with period `p`, the limit runs
//! over the tower `A <- A <- ...` with `A = colim_j Hom(X_{n0}, Y_j)` and
//! every map the precomposition `S` with the period map of `X`. The limit of
//! such a tower is the stable image of `S`, and it injects into `A` by
//! taking the component at `n0`.

use std::fmt;

use super::colim::{hom_from_sheaf_with, ColimSpace, Dim, Tag, DEFAULT_TRUNCATION};
use super::morphism::IndMorphism;
use super::system::{Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Scalar, Subspace};

#[derive(Clone, Debug)]
pub struct HomInd {
    dim: Dim,
    tag: Tag,
    source: SeqSystem,
    target: SeqSystem,
    stage: usize,
    colim: ColimSpace,
    shift: LinearMap,
    lim: Subspace,
}

/// Stable image of an endomorphism and the endomorphism's power reaching it.
fn stable(s: &LinearMap) -> Subspace {
    let d = s.domain_dim();
    let mut power = LinearMap::identity(s.field(), d);
    for _ in 0..d {
        power = s.compose(&power).expect("square");
    }
    power.image()
}

pub fn hom_ind(x: &SeqSystem, y: &SeqSystem) -> Result<HomInd> {
    hom_ind_with(x, y, DEFAULT_TRUNCATION)
}

pub fn hom_ind_with(x: &SeqSystem, y: &SeqSystem, trunc: usize) -> Result<HomInd> {
    if x.space() != y.space() || x.field() != y.field() {
        return Err(Error::SpaceMismatch(
            "ind-objects on different spaces".into(),
        ));
    }
    let cert = x.cert();
    let stationary = cert.rule.is_stationary();
    // a non-stationary source is read at a truncation level as if it stopped there
    let (n, p) = if stationary {
        (cert.n0, cert.p)
    } else {
        (cert.n0.max(trunc), cert.p)
    };
    let xn = x.level(n);
    let colim = hom_from_sheaf_with(&xn, y, 0, trunc)?;
    let field = x.field();
    let big = colim.stage();
    // S on Hom(X_n, Y_M): φ ↦ φ ∘ T with T the period map of X read back
    // into the same level, then pushed to the quotient
    let t = x.transition_between(n, n + p);
    let hom = colim.hom();
    let shift_on_hom = if stationary {
        let onto = xn.hom_space(&y.level(big))?;
        hom.precompose_map(&t, &onto)?
    } else {
        LinearMap::identity(field, hom.dim())
    };
    let q = colim.quotient();
    let qd = q.codomain_dim();
    let cols: Vec<Vec<Scalar>> = (0..qd)
        .map(|i| {
            let mut e = vec![field.zero(); qd];
            e[i] = field.one();
            let lift = q.solve(&e).expect("quotient maps are onto");
            q.apply(&shift_on_hom.apply(&lift))
        })
        .collect();
    let shift = LinearMap::from_columns(field, qd, &cols);
    let lim = stable(&shift);
    let (dim, tag) = match (colim.dim(), &cert.rule) {
        (Dim::Infinite, _) if stationary && shift.is_identity() => (Dim::Infinite, Tag::Certified),
        (Dim::Infinite, _) => (Dim::Infinite, Tag::Truncated(big)),
        (Dim::Finite(_), Rule::Grow(d)) if !d.is_zero() => {
            (Dim::Finite(lim.dim()), Tag::Truncated(trunc))
        }
        (Dim::Finite(_), _) if !stationary => (Dim::Finite(lim.dim()), Tag::Truncated(n)),
        (Dim::Finite(_), _) => (Dim::Finite(lim.dim()), colim.tag()),
    };
    Ok(HomInd {
        dim,
        tag,
        source: x.clone(),
        target: y.clone(),
        stage: n,
        colim,
        shift,
        lim,
    })
}

impl HomInd {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    /// `colim_j Hom(X_{n0}, Y_j)`.
    pub fn colim(&self) -> &ColimSpace {
        &self.colim
    }

    /// The limit as a subspace of the colimit at the source onset.
    pub fn lim(&self) -> &Subspace {
        &self.lim
    }

    /// The precomposition map on the colimit.
    pub fn shift(&self) -> &LinearMap {
        &self.shift
    }

    /// Coordinates in the colimit at the source onset of the class of `f`.
    pub fn class_of(&self, f: &IndMorphism) -> Result<Vec<Scalar>> {
        let n = self.stage;
        let k = n + f.offset();
        self.colim
            .class_at(&f.component(n), k, &self.target, DEFAULT_TRUNCATION)
    }

    /// Builds the ind-morphism with class `coords` at the source onset.
    /// The class must be fixed by the precomposition map so that one
    /// representative, pushed far enough into the target, serves every
    /// period of the source.
    pub fn morphism(&self, coords: &[Scalar]) -> Result<IndMorphism> {
        if !self.lim.contains(coords) {
            return Err(Error::NotAMorphism("class is not in the limit".into()));
        }
        if self.shift.apply(coords) != coords {
            return Err(Error::Unsupported(
                "periodic template needs a fixed class".into(),
            ));
        }
        let (x, y) = (&self.source, &self.target);
        let n = self.stage;
        let p = x.cert().p;
        let rep = self.colim.representative(coords);
        let m = self.colim.stage();
        let settle = self.colim.hom().dim().max(1) * self.colim.period();
        let offset = m + settle + p;
        IndMorphism::generate(x, y, offset, None, |i| {
            let j = if i <= n {
                n
            } else {
                n + (i - n).div_ceil(p) * p
            };
            let to_grid = x.transition_between(i, j);
            y.transition_between(m, i + offset)
                .compose(&rep)?
                .compose(&to_grid)
        })
    }
}

impl fmt::Display for HomInd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim = {} [{}]", self.dim, self.tag)
    }
}
