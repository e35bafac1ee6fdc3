//! Kernels, cokernels, the zero test and exactness for sequential systems.
//!
//! Kernels and cokernels are levelwise. Exactness of `X -> Y -> Z` is
//! decided twice: by the zero test on the levelwise homology, and by the
//! lifting criterion, which asks that every level of the kernel of
//! `Y -> Z` eventually lands in the image of `X`.

use super::beta::factor_through_epi;
use super::colim::{hom_from_sheaf_with, Tag, Verdict, DEFAULT_TRUNCATION};
use super::morphism::IndMorphism;
use super::system::{lcm, PeriodCert, Rule, SeqSystem};
use crate::error::{Error, Result};
use crate::sheaf::Sheaf;

/// A kernel or cokernel in the ind-category with its canonical map.
#[derive(Clone, Debug)]
pub struct IndKernel {
    pub object: SeqSystem,
    /// `ker φ -> X`.
    pub inclusion: IndMorphism,
}

#[derive(Clone, Debug)]
pub struct IndCokernel {
    pub object: SeqSystem,
    /// `Y -> coker φ`.
    pub projection: IndMorphism,
}

/// Levelwise kernel `ker(φ_n: X_n -> Y_{n+δ})`.
pub fn kernel(phi: &IndMorphism) -> Result<IndKernel> {
    let x = phi.source();
    let cert = phi.cert().clone();
    let rule = match (&cert.rule, phi.block()) {
        (Rule::Grow(_), Some(g)) => Rule::Grow(g.kernel()?.object),
        (r, _) => r.clone(),
    };
    let ker = |n: usize| phi.component(n).kernel();
    let object = SeqSystem::generate(
        PeriodCert::new(cert.n0, cert.p, rule)?,
        |n| Ok(ker(n)?.object),
        |n| {
            let (here, there) = (ker(n)?, ker(n + 1)?);
            let pushed = x.transition(n).compose(&here.inclusion)?;
            there
                .inclusion
                .factor_through_mono(&pushed)
                .ok_or_else(|| Error::NotAMorphism("transition leaves the kernel".into()))
        },
    )?;
    let block = phi
        .block()
        .map(|g| g.kernel().map(|k| k.inclusion))
        .transpose()?;
    let inclusion = IndMorphism::generate(&object, x, 0, block, |n| Ok(ker(n)?.inclusion))?;
    Ok(IndKernel { object, inclusion })
}

/// Levelwise cokernel `coker(φ_n: X_n -> Y_{n+δ})`, indexed by `n`.
pub fn cokernel(phi: &IndMorphism) -> Result<IndCokernel> {
    let y = phi.target();
    let d = phi.offset();
    let cert = phi.cert().clone();
    let rule = match (&y.cert().rule, phi.block()) {
        (Rule::Grow(_), Some(g)) => Rule::Grow(g.cokernel()?.object),
        (r, _) => r.clone(),
    };
    let cok = |n: usize| phi.component(n).cokernel();
    let object = SeqSystem::generate(
        PeriodCert::new(cert.n0, cert.p, rule)?,
        |n| Ok(cok(n)?.object),
        |n| {
            let (here, there) = (cok(n)?, cok(n + 1)?);
            let pushed = there.projection.compose(&y.transition(n + d))?;
            factor_through_epi(&here.projection, &pushed)
        },
    )?;
    let block = phi
        .block()
        .map(|g| g.cokernel().map(|c| c.projection))
        .transpose()?;
    let projection = IndMorphism::generate(y, &object, 0, block, |m| {
        let target = cok(m)?;
        target.projection.compose(&y.transition_between(m, m + d))
    })?;
    Ok(IndCokernel { object, projection })
}

/// Whether `"lim" X_n = 0`: every level dies under a long enough
/// transition. Representatives over one period decide it.
pub fn is_ind_zero(x: &SeqSystem) -> Result<Verdict> {
    is_ind_zero_with(x, DEFAULT_TRUNCATION)
}

pub fn is_ind_zero_with(x: &SeqSystem, trunc: usize) -> Result<Verdict> {
    let cert = x.cert();
    if let Rule::Grow(d) = &cert.rule {
        if !d.is_zero() {
            return Ok(Verdict::exact(false));
        }
    }
    let mut verdict = Verdict::exact(true);
    for n in cert.n0..cert.n0 + cert.p {
        let level = x.level(n);
        if level.is_zero() {
            continue;
        }
        let colim = hom_from_sheaf_with(&level, x, n, trunc)?;
        let id = x.transition_between(n, colim.stage());
        let tag = if colim.tag() == Tag::Certified {
            Tag::Exact
        } else {
            colim.tag()
        };
        verdict = verdict.and(Verdict {
            holds: colim.vanishes(&id)?,
            tag,
        });
    }
    Ok(verdict)
}

/// The homology `ker g / im f` of a complex `X -f-> Y -g-> Z`, indexed
/// by the levels of `X`. `g` is first pushed far enough into `Z` that the
/// composite vanishes levelwise.
pub fn homology(f: &IndMorphism, g: &IndMorphism) -> Result<SeqSystem> {
    let gf = f.then(g)?;
    if !gf.is_zero()?.holds {
        return Err(Error::NotAMorphism("the composite is not zero".into()));
    }
    let g2 = push_until_zero(f, g)?;
    let k = kernel(&g2)?;
    let df = f.offset();
    let lifted = IndMorphism::generate(f.source(), &k.object, df, None, |n| {
        let inc = k.inclusion.component(n + df);
        inc.factor_through_mono(&f.component(n))
            .ok_or_else(|| Error::NotAMorphism("image does not lie in the kernel".into()))
    })?;
    Ok(cokernel(&lifted)?.object)
}

/// `g` with a larger offset so that `g_{m} ∘ f_n = 0` at every level.
fn push_until_zero(f: &IndMorphism, g: &IndMorphism) -> Result<IndMorphism> {
    let df = f.offset();
    let cert = f.cert();
    let z = g.target();
    let mut offset = g.offset();
    for n in 0..cert.n0 + cert.p {
        let comp = g.component(n + df).compose(&f.component(n))?;
        let base = n + df + g.offset();
        let colim = hom_from_sheaf_with(&f.source().level(n), z, base, DEFAULT_TRUNCATION)?;
        let far = colim.stage() + colim.hom().dim().max(1) * colim.period();
        let mut m = base;
        while m < far && !z.transition_between(base, m).compose(&comp)?.is_zero() {
            m += 1;
        }
        offset = offset.max(m - n - df);
    }
    let g2 = g.with_offset(offset)?;
    for n in 0..cert.explicit_levels() {
        if !g2.component(n + df).compose(&f.component(n))?.is_zero() {
            return Err(Error::Unsupported(
                "composite does not vanish levelwise within the horizon".into(),
            ));
        }
    }
    Ok(g2)
}

/// The two exactness verdicts for `X -f-> Y -g-> Z` at `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exactness {
    pub homology: Verdict,
    pub lifting: Verdict,
}

impl Exactness {
    /// The verdict of the homology computation, which is the one carrying
    /// a certificate.
    pub fn verdict(&self) -> Verdict {
        self.homology
    }

    /// Both methods reached a definite answer and they differ.
    pub fn disagree(&self) -> bool {
        let definite = |v: Verdict| !v.tag.is_truncated();
        definite(self.homology)
            && definite(self.lifting)
            && self.homology.holds != self.lifting.holds
    }
}

/// Exactness at `Y`, computed by both methods; panics if two definite
/// answers disagree.
pub fn is_exact(f: &IndMorphism, g: &IndMorphism) -> Result<Exactness> {
    let gf = f.then(g)?.is_zero()?;
    if !gf.holds {
        let no = Verdict {
            holds: false,
            tag: gf.tag,
        };
        return Ok(Exactness {
            homology: no,
            lifting: no,
        });
    }
    let homology = is_ind_zero(&homology(f, g)?)?;
    let lifting = lifting_test(f, g)?;
    let out = Exactness { homology, lifting };
    assert!(
        !out.disagree(),
        "exactness by homology and by lifting disagree"
    );
    Ok(out)
}

/// For each representative level `m` of `Y`, search `M >= m` with
/// `t_{m,M}(ker g_m) ⊆ im f` at level `M`. Finding one is a proof; not
/// finding one within the horizon is a truncated negative.
fn lifting_test(f: &IndMorphism, g: &IndMorphism) -> Result<Verdict> {
    let g2 = push_until_zero(f, g)?;
    let y = g2.source();
    let df = f.offset();
    let p = lcm(f.cert().p, g2.cert().p);
    let start = f.cert().n0.max(g2.cert().n0.saturating_sub(df));
    let mut verdict = Verdict::exact(true);
    if let (Some(fb), Some(gb)) = (f.block(), g2.block()) {
        let k = gb.kernel()?;
        let img = fb.image()?;
        if img.inclusion.factor_through_mono(&k.inclusion).is_none() {
            return Ok(Verdict::exact(false));
        }
    }
    for n in start..start + p {
        let m = n + df;
        let k = g2.component(m).kernel()?;
        let size = sheaf_size(&k.object) + sheaf_size(&y.level(m));
        let horizon = m + p * (size + 2);
        let mut found = false;
        for big in m..=horizon {
            let pushed = y.transition_between(m, big).compose(&k.inclusion)?;
            let Some(src) = big.checked_sub(df) else {
                continue;
            };
            let img = f.component(src).image()?;
            if img.inclusion.factor_through_mono(&pushed).is_some() {
                found = true;
                break;
            }
        }
        let here = if found {
            Verdict::exact(true)
        } else {
            Verdict {
                holds: false,
                tag: Tag::Truncated(horizon),
            }
        };
        verdict = verdict.and(here);
    }
    Ok(verdict)
}

/// Total dimension of the stalks in the window plus the tails.
fn sheaf_size(s: &Sheaf) -> usize {
    let (lo, hi) = s.window();
    (lo..=hi).map(|c| s.dim(c)).sum::<usize>() + s.tails().0 + s.tails().1
}

/// Whether `φ` is an isomorphism in the ind-category: kernel and cokernel
/// are both ind-zero.
pub fn is_iso(phi: &IndMorphism) -> Result<Verdict> {
    Ok(is_ind_zero(&kernel(phi)?.object)?.and(is_ind_zero(&cokernel(phi)?.object)?))
}
