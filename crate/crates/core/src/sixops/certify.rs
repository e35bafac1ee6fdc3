//! Certificate search for systems built levelwise from certified operands.

use crate::error::{Error, Result};
use crate::indcat::{PeriodCert, Rule, SeqSystem};
use crate::sheaf::{Sheaf, SheafMorphism};

/// Onsets tried after the proposed one, in steps of the period.
const TRIES: usize = 24;

/// The generated system under the first certificate that validates. Each
/// onset `n0 + k p` tries `hint`, then a stretch with its cuts moved past
/// the window of the level, then the stationary rule.
pub(crate) fn certify(
    hint: &PeriodCert,
    level: impl Fn(usize) -> Result<Sheaf>,
    transition: impl Fn(usize) -> Result<SheafMorphism>,
) -> Result<SeqSystem> {
    let mut last = Error::InvalidCertificate(format!("no certificate near [{hint}]"));
    for k in 0..TRIES {
        let n0 = hint.n0 + k * hint.p;
        for cert in candidates(hint, n0, &level)? {
            match SeqSystem::generate(cert, &level, &transition) {
                Ok(s) => return Ok(s),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

fn candidates(
    hint: &PeriodCert,
    n0: usize,
    level: &impl Fn(usize) -> Result<Sheaf>,
) -> Result<Vec<PeriodCert>> {
    let p = hint.p;
    let mut out = Vec::new();
    if !hint.rule.is_stationary() {
        out.push(PeriodCert::new(n0, p, hint.rule.clone())?);
    }
    if let Rule::Stretch { a, b, l, r } = &hint.rule {
        // move the cuts out of the way of the bounded part
        let (lo, hi) = level(n0)?.window();
        let (wa, wb) = (
            (*a).min(lo.div_euclid(2) - 1),
            (*b).max(hi.div_euclid(2) + 1),
        );
        if (wa, wb) != (*a, *b) {
            out.push(PeriodCert::new(
                n0,
                p,
                Rule::Stretch {
                    a: wa,
                    b: wb,
                    l: *l,
                    r: *r,
                },
            )?);
        }
    }
    out.push(PeriodCert::stationary(n0));
    Ok(out)
}
