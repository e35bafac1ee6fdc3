//! `⊗` along the diagonal chain and `ihom` with a first argument that is
//! isomorphic to a sheaf.

use super::certify::certify;
use crate::error::{Error, Result};
use crate::indcat::{alpha, harmonize, iota, lcm, PeriodCert, Rule, SeqSystem};
use crate::sheaf::Sheaf;

fn check_pair(x: &SeqSystem, y: &SeqSystem) -> Result<()> {
    if x.space() != y.space() || x.field() != y.field() {
        return Err(Error::SpaceMismatch(
            "ind-objects on different spaces".into(),
        ));
    }
    Ok(())
}

fn growth(s: &SeqSystem) -> Option<&Sheaf> {
    match &s.cert().rule {
        Rule::Grow(d) if !d.is_zero() => Some(d),
        _ => None,
    }
}

/// `"lim"_n X_n ⊗ Y_n`. When exactly one operand grows, it is written
/// first so that the growth summand stays a leading block.
pub fn tensor_ind(x: &SeqSystem, y: &SeqSystem) -> Result<SeqSystem> {
    check_pair(x, y)?;
    let (g, h) = match (growth(x), growth(y)) {
        (Some(_), Some(_)) => {
            return Err(Error::Unsupported(
                "tensor product of two growing systems".into(),
            ));
        }
        (None, Some(_)) => (y, x),
        _ => (x, y),
    };
    let (g, h, hint) = match harmonize(g, h, 0) {
        Ok((gs, hs)) => {
            let c = gs.cert().clone();
            let rule = match &c.rule {
                Rule::Grow(d) if !d.is_zero() => Rule::Grow(d.tensor(&hs.level(c.n0))?),
                r if r.is_stationary() => Rule::Translate(0),
                r => r.clone(),
            };
            let hint = PeriodCert::new(c.n0, c.p, rule)?;
            (gs, hs, hint)
        }
        Err(_) => {
            // stretches with different tails grow only where both grow; a
            // translating system against a bounded stationary one settles
            // once the two no longer meet
            let (cg, ch) = (g.cert(), h.cert());
            let p = lcm(cg.p, ch.p);
            let rule = match (cg.rule.power(p / cg.p), ch.rule.power(p / ch.p)) {
                (
                    Rule::Stretch {
                        a: a1,
                        b: b1,
                        l: l1,
                        r: r1,
                    },
                    Rule::Stretch {
                        a: a2,
                        b: b2,
                        l: l2,
                        r: r2,
                    },
                ) if (l1.min(l2), r1.min(r2)) != (0, 0) => Rule::Stretch {
                    a: a1.min(a2),
                    b: b1.max(b2),
                    l: l1.min(l2),
                    r: r1.min(r2),
                },
                _ => Rule::Translate(0),
            };
            let hint = PeriodCert::new(cg.n0.max(ch.n0), p, rule)?;
            (g.clone(), h.clone(), hint)
        }
    };
    certify(
        &hint,
        |n| g.level(n).tensor(&h.level(n)),
        |n| g.transition(n).tensor(&h.transition(n)),
    )
}

/// The sheaf `F` with `X ≅ ι F`, when `X` is stationary or literally the
/// system `ι F`.
fn as_sheaf(x: &SeqSystem) -> Result<Sheaf> {
    let f = alpha(x)?;
    if x.cert().rule.is_stationary() {
        return Ok(f);
    }
    let i = iota(&f)?;
    let e = x.cert().explicit_levels().max(i.cert().explicit_levels());
    let same = (0..e).all(|n| {
        i.level(n).same_as(&x.level(n)) && (n + 1 == e || i.transition(n).same_as(&x.transition(n)))
    });
    if !same {
        return Err(Error::Unsupported(
            "ihom needs a first argument isomorphic to a sheaf".into(),
        ));
    }
    Ok(f)
}

/// `ihom(X, Y) = "lim"_j hom(F, Y_j)` for `X ≅ ι F`; the outer limit over
/// the levels of `X` is then trivial.
pub fn ihom_ind(x: &SeqSystem, y: &SeqSystem) -> Result<SeqSystem> {
    check_pair(x, y)?;
    let f = as_sheaf(x)?;
    let cy = y.cert();
    let hint = match &cy.rule {
        Rule::Grow(d) if !d.is_zero() => PeriodCert::new(cy.n0, cy.p, Rule::Grow(f.hom_sheaf(d)?))?,
        _ => cy.clone(),
    };
    certify(
        &hint,
        |n| f.hom_sheaf(&y.level(n)),
        |n| y.transition(n).hom_sheaf_post(&f),
    )
}
