//! Restriction to an open set and the presheaf `U ↦ Hom(X|_U, Y|_U)`.
//!
//! `X|_U` is kept on the whole space as `"lim"_n (X_n)_{V_n}`, where `V_n`
//! runs through the cofinal chain of opens `V ⊂⊂ U`; this is `X ⊗ k̃_U`.

use std::fmt;

use super::tensor::tensor_ind;
use crate::error::{Error, Result};
use crate::indcat::{beta_open, hom_ind, Dim, HomInd, IndMorphism, SeqSystem, Tag, Verdict};
use crate::linalg::{LinearMap, Scalar};
use crate::space::{LocallyClosedSet, OpenSet};

/// `X|_U`.
pub fn restrict(x: &SeqSystem, u: &OpenSet) -> Result<SeqSystem> {
    if u.space() != x.space() {
        return Err(Error::SpaceMismatch("open set of another space".into()));
    }
    tensor_ind(x, &beta_open(u, x.field())?)
}

/// `φ|_U : X|_U -> Y|_U`, with components `φ_n` cut down to `V_n`.
pub fn restrict_morphism(phi: &IndMorphism, u: &OpenSet) -> Result<IndMorphism> {
    let (x, y) = (restrict(phi.source(), u)?, restrict(phi.target(), u)?);
    let d = phi.offset();
    IndMorphism::generate(&x, &y, d, None, |n| {
        let v = u.rc_exhaustion(n as i64);
        let cut = phi
            .component(n)
            .restrict_locally_closed(&LocallyClosedSet::from_open(v.clone()))?;
        y.level(n + d).open_inclusion(&v)?.compose(&cut)
    })
}

/// The Hom presheaf of two ind-objects.
#[derive(Clone, Debug)]
pub struct HomPresheaf {
    x: SeqSystem,
    y: SeqSystem,
}

pub fn hom_presheaf(x: &SeqSystem, y: &SeqSystem) -> HomPresheaf {
    HomPresheaf {
        x: x.clone(),
        y: y.clone(),
    }
}

/// Outcome of the equalizer check
/// `0 -> F(U) -> ∏ F(U_a) => ∏ F(U_a ∩ U_b)` on one cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glueing {
    pub sections: usize,
    pub equalizer: usize,
    pub injective: bool,
    pub verdict: Verdict,
}

impl fmt::Display for Glueing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sections {} equalizer {} injective {} -> {} [{}]",
            self.sections,
            self.equalizer,
            self.injective,
            if self.verdict.holds { "pass" } else { "fail" },
            self.verdict.tag
        )
    }
}

impl HomPresheaf {
    /// `Hom(X|_U, Y|_U)`.
    pub fn value(&self, u: &OpenSet) -> Result<HomInd> {
        hom_ind(&restrict(&self.x, u)?, &restrict(&self.y, u)?)
    }

    /// The restriction map `F(U) -> F(V)` for `V ⊆ U`, in the bases of the
    /// limit subspaces.
    pub fn restriction(&self, u: &OpenSet, v: &OpenSet) -> Result<LinearMap> {
        self.restriction_between(&self.value(u)?, &self.value(v)?, v)
    }

    fn restriction_between(&self, big: &HomInd, small: &HomInd, v: &OpenSet) -> Result<LinearMap> {
        let field = self.x.field();
        let cols: Vec<Vec<Scalar>> = big
            .lim()
            .basis()
            .iter()
            .map(|b| {
                let phi = restrict_morphism(&big.morphism(b)?, v)?;
                let class = small.class_of(&phi)?;
                small
                    .lim()
                    .coordinates(&class)
                    .ok_or_else(|| Error::NotAMorphism("restriction leaves the limit".into()))
            })
            .collect::<Result<_>>()?;
        Ok(LinearMap::from_columns(field, small.lim().dim(), &cols))
    }

    /// Checks that `F(U)` is the equalizer of the two restriction maps
    /// into the pairwise intersections, `U` the union of the cover.
    pub fn check_glueing(&self, cover: &[OpenSet]) -> Result<Glueing> {
        let field = self.x.field();
        let u = cover
            .iter()
            .try_fold(OpenSet::empty(self.x.space()), |acc, v| acc.union(v))?;
        let whole = self.value(&u)?;
        let parts: Vec<HomInd> = cover.iter().map(|v| self.value(v)).collect::<Result<_>>()?;
        let mut tag = whole.tag();
        for h in &parts {
            tag = tag.meet(h.tag());
        }
        if parts
            .iter()
            .chain([&whole])
            .any(|h| matches!(h.dim(), Dim::Infinite))
        {
            return Err(Error::Unsupported(
                "glueing check needs finite Hom spaces".into(),
            ));
        }
        let dims: Vec<usize> = parts.iter().map(|h| h.lim().dim()).collect();
        let total: usize = dims.iter().sum();
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, d| Some(std::mem::replace(acc, *acc + d)))
            .collect();
        let n = whole.lim().dim();
        let mut r = LinearMap::zero(field, n, 0);
        for (v, h) in cover.iter().zip(&parts) {
            r = r.vstack(&self.restriction_between(&whole, h, v)?)?;
        }
        let mut d = LinearMap::zero(field, total, 0);
        for a in 0..cover.len() {
            for b in a + 1..cover.len() {
                let w = cover[a].intersection(&cover[b])?;
                let hw = self.value(&w)?;
                tag = tag.meet(hw.tag());
                let ra = self.restriction_between(&parts[a], &hw, &w)?;
                let rb = self.restriction_between(&parts[b], &hw, &w)?;
                let mut row = LinearMap::zero(field, total, hw.lim().dim());
                for i in 0..hw.lim().dim() {
                    for j in 0..dims[a] {
                        row.set(i, offsets[a] + j, ra.get(i, j).clone());
                    }
                    for j in 0..dims[b] {
                        row.set(i, offsets[b] + j, rb.get(i, j).neg());
                    }
                }
                d = d.vstack(&row)?;
            }
        }
        let injective = r.is_injective();
        let equalizer = d.kernel().dim();
        let complex = d.compose(&r)?.is_zero();
        let holds = injective && complex && r.rank() == equalizer;
        let tag = if tag == Tag::Certified {
            Tag::Exact
        } else {
            tag
        };
        Ok(Glueing {
            sections: n,
            equalizer,
            injective,
            verdict: Verdict { holds, tag },
        })
    }
}
