//! Morphisms of sequential systems, `"lim" f_n` with `f_n: X_n -> Y_{n+δ}`.

use std::fmt;

use super::colim::{hom_from_sheaf_with, Tag, Verdict, DEFAULT_TRUNCATION};
use super::system::{harmonize, PeriodCert, Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::sheaf::SheafMorphism;

/// A morphism of ind-objects given by components `X_n -> Y_{n+offset}`.
///
/// Source and target are recertified so that both follow one periodic
/// rule; components past the explicit range are produced by that rule
/// (with the block map on the growth summands for growth rules).
#[derive(Clone, Debug)]
pub struct IndMorphism {
    source: SeqSystem,
    target: SeqSystem,
    offset: usize,
    block: Option<SheafMorphism>,
    components: Vec<SheafMorphism>,
}

fn block_power(block: &SheafMorphism, k: usize) -> Result<SheafMorphism> {
    (1..k).try_fold(block.clone(), |acc, _| block.direct_sum(&acc))
}

impl IndMorphism {
    /// Builds a morphism from its components and checks the compatibility
    /// squares over the explicit range and the periodicity of the
    /// components over one period.
    pub fn generate(
        source: &SeqSystem,
        target: &SeqSystem,
        offset: usize,
        block: Option<SheafMorphism>,
        component: impl Fn(usize) -> Result<SheafMorphism>,
    ) -> Result<IndMorphism> {
        if source.space() != target.space() || source.field() != target.field() {
            return Err(Error::SpaceMismatch(
                "ind-morphism between different spaces".into(),
            ));
        }
        let (x, y) = harmonize(source, target, offset)?;
        let cert = x.cert().clone();
        let block = match (&cert.rule, block) {
            (Rule::Grow(dx), b) => {
                let Rule::Grow(dy) = &y.cert().rule else {
                    unreachable!("harmonized")
                };
                let g = match b {
                    Some(g) => g,
                    None => SheafMorphism::zero(dx, dy)?,
                };
                if !g.source().same_as(dx) || !g.target().same_as(dy) {
                    return Err(Error::NotAMorphism("block map has the wrong ends".into()));
                }
                Some(g)
            }
            _ => None,
        };
        let e = cert.explicit_levels();
        let components = (0..e).map(&component).collect::<Result<Vec<_>>>()?;
        let m = IndMorphism {
            source: x,
            target: y,
            offset,
            block,
            components,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let cert = self.source.cert();
        let e = cert.explicit_levels();
        for (n, f) in self.components.iter().enumerate() {
            if !f.source().same_as(&self.source.level(n))
                || !f.target().same_as(&self.target.level(n + self.offset))
            {
                return Err(Error::NotAMorphism(format!(
                    "component {n} has the wrong ends"
                )));
            }
        }
        for n in 0..e - 1 {
            let left = self
                .target
                .transition(n + self.offset)
                .compose(&self.components[n])?;
            let right = self.components[n + 1].compose(&self.source.transition(n))?;
            if !left.same_as(&right) {
                return Err(Error::NotAMorphism(format!(
                    "square at level {n} does not commute"
                )));
            }
        }
        for n in cert.n0..cert.n0 + cert.p {
            let next = cert
                .rule
                .apply_component(&self.components[n], self.block.as_ref())?;
            if !next.same_as(&self.components[n + cert.p]) {
                return Err(Error::InvalidCertificate(format!(
                    "component {} does not follow the rule from component {n}",
                    n + cert.p
                )));
            }
        }
        Ok(())
    }

    /// The identity of a system.
    pub fn identity(x: &SeqSystem) -> Result<IndMorphism> {
        IndMorphism::generate(x, x, 0, x_block_identity(x), |n| {
            Ok(SheafMorphism::identity(&x.level(n)))
        })
    }

    pub fn zero(x: &SeqSystem, y: &SeqSystem) -> Result<IndMorphism> {
        IndMorphism::generate(x, y, 0, None, |n| {
            SheafMorphism::zero(&x.level(n), &y.level(n))
        })
    }

    pub fn source(&self) -> &SeqSystem {
        &self.source
    }

    pub fn target(&self) -> &SeqSystem {
        &self.target
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The common certificate, indexed by source levels.
    pub fn cert(&self) -> &PeriodCert {
        self.source.cert()
    }

    pub fn block(&self) -> Option<&SheafMorphism> {
        self.block.as_ref()
    }

    /// Component `X_n -> Y_{n+offset}`.
    pub fn component(&self, n: usize) -> SheafMorphism {
        let last = self.components.len() - 1;
        if n <= last {
            return self.components[n].clone();
        }
        let p = self.cert().p;
        let k = (n - last).div_ceil(p);
        let rule = self.cert().rule.power(k);
        let block = self
            .block
            .as_ref()
            .map(|b| block_power(b, k).expect("same space"));
        rule.apply_component(&self.components[n - k * p], block.as_ref())
            .expect("validated rule")
    }

    /// The same morphism with components `X_n -> Y_{n+offset}` for a larger
    /// offset, obtained by composing with transitions of the target.
    pub fn with_offset(&self, offset: usize) -> Result<IndMorphism> {
        if offset < self.offset {
            return Err(Error::Unsupported("offsets can only grow".into()));
        }
        let d = self.offset;
        IndMorphism::generate(
            &self.source,
            &self.target,
            offset,
            self.block.clone(),
            |n| {
                self.target
                    .transition_between(n + d, n + offset)
                    .compose(&self.component(n))
            },
        )
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &IndMorphism) -> Result<IndMorphism> {
        if !self.target.level(0).same_as(&other.source.level(0)) {
            return Err(Error::NotAMorphism(
                "ind-morphisms are not composable".into(),
            ));
        }
        let d = self.offset;
        let block = match (&self.block, &other.block) {
            (Some(f), Some(g)) => Some(g.compose(f)?),
            _ => None,
        };
        IndMorphism::generate(&self.source, &other.target, d + other.offset, block, |n| {
            other.component(n + d).compose(&self.component(n))
        })
    }

    fn combine(
        &self,
        other: &IndMorphism,
        op: impl Fn(&SheafMorphism, &SheafMorphism) -> Result<SheafMorphism>,
    ) -> Result<IndMorphism> {
        let d = self.offset.max(other.offset);
        let (a, b) = (self.with_offset(d)?, other.with_offset(d)?);
        let block = match (&a.block, &b.block) {
            (Some(f), Some(g)) => Some(op(f, g)?),
            _ => None,
        };
        IndMorphism::generate(&a.source, &a.target, d, block, |n| {
            op(&a.component(n), &b.component(n))
        })
    }

    pub fn add(&self, other: &IndMorphism) -> Result<IndMorphism> {
        self.combine(other, |f, g| f.add(g))
    }

    pub fn sub(&self, other: &IndMorphism) -> Result<IndMorphism> {
        self.combine(other, |f, g| f.sub(g))
    }

    /// Whether the morphism is zero in the ind-category: every component
    /// dies after composing with a long enough target transition. Levels
    /// below the onset factor through the onset, and later ones are the
    /// rule applied to a representative.
    pub fn is_zero(&self) -> Result<Verdict> {
        self.is_zero_with(DEFAULT_TRUNCATION)
    }

    pub fn is_zero_with(&self, trunc: usize) -> Result<Verdict> {
        if self.block.as_ref().is_some_and(|g| !g.is_zero()) {
            return Ok(Verdict::exact(false));
        }
        let cert = self.cert();
        let mut verdict = Verdict::exact(true);
        for n in cert.n0..cert.n0 + cert.p {
            let probe = self.source.level(n);
            let colim = hom_from_sheaf_with(&probe, &self.target, n + self.offset, trunc)?;
            let pushed = self
                .target
                .transition_between(n + self.offset, colim.stage())
                .compose(&self.component(n))?;
            let here = Verdict {
                holds: colim.vanishes(&pushed)?,
                tag: colim.tag(),
            };
            let here = if here.tag == Tag::Certified {
                Verdict {
                    tag: Tag::Exact,
                    ..here
                }
            } else {
                here
            };
            verdict = verdict.and(here);
        }
        Ok(verdict)
    }

    /// Equality in the ind-category: the difference is zero.
    pub fn equals(&self, other: &IndMorphism) -> Result<Verdict> {
        self.sub(other)?.is_zero()
    }
}

fn x_block_identity(x: &SeqSystem) -> Option<SheafMorphism> {
    match &x.cert().rule {
        Rule::Grow(d) => Some(SheafMorphism::identity(d)),
        _ => None,
    }
}

impl fmt::Display for IndMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ind-morphism of offset {} [{}]",
            self.offset,
            self.cert()
        )
    }
}
