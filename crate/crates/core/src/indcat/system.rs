//! Ind-objects: finite filtered diagrams and certified sequential systems.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::sheaf::{Sheaf, SheafMorphism};
use crate::space::{FinitePoset, Space};

/// How level `n + p` is obtained from level `n` once a system is periodic.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// Translate along the line by `s` vertices (`s = 0`: repeat in place).
    Translate(i64),
    /// Insert `l` copies of the cells `V(a), E(a)` left of `V(a)` and `r`
    /// copies of `E(b-1), V(b)` right of `V(b)`.
    Stretch { a: i64, b: i64, l: i64, r: i64 },
    /// Prepend a fixed summand: level `n+1 = D ⊕ level n` and transition
    /// `n+1 = id_D ⊕ transition n`. Only with period one.
    Grow(Sheaf),
}

impl Rule {
    /// The rule applied `k` times.
    pub fn power(&self, k: usize) -> Rule {
        let k64 = k as i64;
        match self {
            Rule::Translate(s) => Rule::Translate(s * k64),
            Rule::Stretch { a, b, l, r } => Rule::Stretch {
                a: *a,
                b: *b,
                l: l * k64,
                r: r * k64,
            },
            Rule::Grow(d) => {
                let sum = (1..k).fold(d.clone(), |acc, _| acc.direct_sum(d).expect("same space"));
                Rule::Grow(if k == 0 {
                    Sheaf::zero(d.space(), d.field())
                } else {
                    sum
                })
            }
        }
    }

    pub fn apply(&self, s: &Sheaf) -> Result<Sheaf> {
        match self {
            Rule::Translate(0) => Ok(s.clone()),
            Rule::Translate(t) => s.shift(*t),
            Rule::Stretch { a, b, l, r } => s.stretch(*a, *b, *l, *r),
            Rule::Grow(d) => d.direct_sum(s),
        }
    }

    /// The rule on transition maps.
    pub fn apply_transition(&self, m: &SheafMorphism) -> Result<SheafMorphism> {
        match self {
            Rule::Translate(0) => Ok(m.clone()),
            Rule::Translate(t) => m.shift(*t),
            Rule::Stretch { a, b, l, r } => m.stretch(*a, *b, *l, *r),
            Rule::Grow(d) => SheafMorphism::identity(d).direct_sum(m),
        }
    }

    /// Rule on the components of a morphism between two systems; `block`
    /// is the map between the growth summands for [`Rule::Grow`].
    pub(crate) fn apply_component(
        &self,
        m: &SheafMorphism,
        block: Option<&SheafMorphism>,
    ) -> Result<SheafMorphism> {
        match (self, block) {
            (Rule::Grow(_), Some(g)) => g.direct_sum(m),
            (Rule::Grow(_), None) => Err(Error::InvalidCertificate(
                "growth rule needs a block map".into(),
            )),
            _ => self.apply_transition(m),
        }
    }

    pub fn is_stationary(&self) -> bool {
        match self {
            Rule::Translate(0) => true,
            Rule::Grow(d) => d.is_zero(),
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Translate(s) => write!(f, "translate {s}"),
            Rule::Stretch { a, b, l, r } => write!(f, "stretch {a} {b} {l} {r}"),
            Rule::Grow(_) => write!(f, "grow"),
        }
    }
}

/// Finite certificate that a sequential system is periodic from level `n0`
/// on with period `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodCert {
    pub n0: usize,
    pub p: usize,
    pub rule: Rule,
}

impl PeriodCert {
    pub fn new(n0: usize, p: usize, rule: Rule) -> Result<PeriodCert> {
        if p == 0 {
            return Err(Error::InvalidCertificate("period must be positive".into()));
        }
        if matches!(rule, Rule::Grow(_)) && p != 1 {
            return Err(Error::InvalidCertificate(
                "growth certificates have period one".into(),
            ));
        }
        Ok(PeriodCert { n0, p, rule })
    }

    /// Constant from level `n0`.
    pub fn stationary(n0: usize) -> PeriodCert {
        PeriodCert {
            n0,
            p: 1,
            rule: Rule::Translate(0),
        }
    }

    /// Number of explicitly stored levels.
    pub fn explicit_levels(&self) -> usize {
        self.n0 + 2 * self.p + 1
    }
}

impl fmt::Display for PeriodCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n0={} p={} {}", self.n0, self.p, self.rule)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A sequential system `X_0 -> X_1 -> ...` stored explicitly on the levels
/// `0..=n0+2p` of its certificate; later levels are produced by the rule.
#[derive(Clone, Debug)]
pub struct SeqSystem {
    space: Space,
    field: Field,
    levels: Vec<Sheaf>,
    transitions: Vec<SheafMorphism>,
    cert: PeriodCert,
}

impl SeqSystem {
    /// Checks shapes and re-derives the levels `n0+p..=n0+2p` from the rule.
    pub fn new(
        levels: Vec<Sheaf>,
        transitions: Vec<SheafMorphism>,
        cert: PeriodCert,
    ) -> Result<SeqSystem> {
        let e = cert.explicit_levels();
        if levels.len() != e || transitions.len() != e - 1 {
            return Err(Error::InvalidCertificate(format!(
                "expected {e} levels and {} transitions, got {} and {}",
                e - 1,
                levels.len(),
                transitions.len()
            )));
        }
        let space = levels[0].space().clone();
        let field = levels[0].field();
        for (n, t) in transitions.iter().enumerate() {
            if !t.source().same_as(&levels[n]) || !t.target().same_as(&levels[n + 1]) {
                return Err(Error::InvalidCertificate(format!(
                    "transition {n} does not connect levels {n} and {}",
                    n + 1
                )));
            }
        }
        if let Rule::Grow(d) = &cert.rule {
            if d.space() != &space {
                return Err(Error::InvalidCertificate(
                    "growth summand lives on another space".into(),
                ));
            }
        }
        if !space.is_line() && !matches!(cert.rule, Rule::Translate(0) | Rule::Grow(_)) {
            return Err(Error::InvalidCertificate(
                "translation and stretching need the line".into(),
            ));
        }
        let (n0, p) = (cert.n0, cert.p);
        for n in n0..=n0 + p {
            if !cert.rule.apply(&levels[n])?.same_as(&levels[n + p]) {
                return Err(Error::InvalidCertificate(format!(
                    "level {} is not the rule applied to level {n}",
                    n + p
                )));
            }
        }
        for n in n0..n0 + p {
            if !cert
                .rule
                .apply_transition(&transitions[n])?
                .same_as(&transitions[n + p])
            {
                return Err(Error::InvalidCertificate(format!(
                    "transition {} is not the rule applied to transition {n}",
                    n + p
                )));
            }
        }
        Ok(SeqSystem {
            space,
            field,
            levels,
            transitions,
            cert,
        })
    }

    /// Builds the explicit part of a system from generators and validates
    /// the proposed certificate against them.
    pub fn generate(
        cert: PeriodCert,
        level: impl Fn(usize) -> Result<Sheaf>,
        transition: impl Fn(usize) -> Result<SheafMorphism>,
    ) -> Result<SeqSystem> {
        let e = cert.explicit_levels();
        let levels = (0..e).map(&level).collect::<Result<Vec<_>>>()?;
        let transitions = (0..e - 1).map(&transition).collect::<Result<Vec<_>>>()?;
        SeqSystem::new(levels, transitions, cert)
    }

    /// The constant system on `f` with identity transitions.
    pub fn constant(f: &Sheaf) -> SeqSystem {
        let cert = PeriodCert::stationary(0);
        let e = cert.explicit_levels();
        SeqSystem {
            space: f.space().clone(),
            field: f.field(),
            levels: vec![f.clone(); e],
            transitions: vec![SheafMorphism::identity(f); e - 1],
            cert,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cert(&self) -> &PeriodCert {
        &self.cert
    }

    pub fn explicit_levels(&self) -> &[Sheaf] {
        &self.levels
    }

    pub fn explicit_transitions(&self) -> &[SheafMorphism] {
        &self.transitions
    }

    /// Base level in the explicit range and number of periods to get to `n`.
    fn reduce(&self, n: usize, last: usize) -> (usize, usize) {
        if n <= last {
            return (n, 0);
        }
        let k = (n - last).div_ceil(self.cert.p);
        (n - k * self.cert.p, k)
    }

    /// Level `n`.
    pub fn level(&self, n: usize) -> Sheaf {
        let (base, k) = self.reduce(n, self.levels.len() - 1);
        if k == 0 {
            return self.levels[base].clone();
        }
        self.cert
            .rule
            .power(k)
            .apply(&self.levels[base])
            .expect("validated rule")
    }

    /// Transition `X_n -> X_{n+1}`.
    pub fn transition(&self, n: usize) -> SheafMorphism {
        let (base, k) = self.reduce(n, self.transitions.len() - 1);
        if k == 0 {
            return self.transitions[base].clone();
        }
        self.cert
            .rule
            .power(k)
            .apply_transition(&self.transitions[base])
            .expect("validated rule")
    }

    /// Composite transition `X_n -> X_m` for `n <= m`.
    pub fn transition_between(&self, n: usize, m: usize) -> SheafMorphism {
        assert!(n <= m, "transitions go up");
        (n..m).fold(SheafMorphism::identity(&self.level(n)), |acc, k| {
            self.transition(k)
                .compose(&acc)
                .expect("consecutive levels")
        })
    }

    /// The system with the first `k` levels dropped.
    pub fn drop_levels(&self, k: usize) -> Result<SeqSystem> {
        let cert = PeriodCert {
            n0: self.cert.n0.saturating_sub(k),
            ..self.cert.clone()
        };
        SeqSystem::generate(
            cert,
            |n| Ok(self.level(n + k)),
            |n| Ok(self.transition(n + k)),
        )
    }

    /// The same system checked against another certificate.
    pub fn recertify(&self, cert: PeriodCert) -> Result<SeqSystem> {
        SeqSystem::generate(cert, |n| Ok(self.level(n)), |n| Ok(self.transition(n)))
    }

    /// Transitions are isomorphisms from some level on (checked over one
    /// period after the onset, which covers all later levels).
    pub fn is_representable(&self) -> bool {
        let (n0, p) = (self.cert.n0, self.cert.p);
        (n0..n0 + p).all(|n| self.transition(n).is_iso())
    }
}

/// Recertifies `x` and `y` (read from level `offset` on) with the same
/// onset and period and matching rules, so that morphisms `X_n -> Y_{n+offset}`
/// can be described by one periodic template.
pub(crate) fn harmonize(
    x: &SeqSystem,
    y: &SeqSystem,
    offset: usize,
) -> Result<(SeqSystem, SeqSystem)> {
    let (cx, cy) = (x.cert(), y.cert());
    let p = lcm(cx.p, cy.p);
    let rx = cx.rule.power(p / cx.p);
    let ry = cy.rule.power(p / cy.p);
    let base = cx.n0.max(cy.n0.saturating_sub(offset));
    let zero = |s: &SeqSystem| Rule::Grow(Sheaf::zero(s.space(), s.field()));
    let stretch_bounds = |s: &SeqSystem| {
        let (lo, hi) = s.level(base).window();
        (lo.div_euclid(2) - 1, hi.div_euclid(2) + 1)
    };
    let (rx, ry) = match (&rx, &ry) {
        _ if rx.is_stationary() && ry.is_stationary() => (Rule::Translate(0), Rule::Translate(0)),
        (Rule::Grow(_), Rule::Grow(_)) => (rx.clone(), ry.clone()),
        (Rule::Grow(_), _) if ry.is_stationary() => (rx.clone(), zero(y)),
        (_, Rule::Grow(_)) if rx.is_stationary() => (zero(x), ry.clone()),
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
        ) if (l1, r1) == (l2, r2) => {
            let rule = Rule::Stretch {
                a: *a1.min(a2),
                b: *b1.max(b2),
                l: *l1,
                r: *r1,
            };
            (rule.clone(), rule)
        }
        (Rule::Stretch { a, b, l, r }, _) if ry.is_stationary() => {
            let (lo, hi) = stretch_bounds(y);
            let rule = Rule::Stretch {
                a: (*a).min(lo),
                b: (*b).max(hi),
                l: *l,
                r: *r,
            };
            (rule.clone(), rule)
        }
        (_, Rule::Stretch { a, b, l, r }) if rx.is_stationary() => {
            let (lo, hi) = stretch_bounds(x);
            let rule = Rule::Stretch {
                a: (*a).min(lo),
                b: (*b).max(hi),
                l: *l,
                r: *r,
            };
            (rule.clone(), rule)
        }
        _ if rx == ry => (rx.clone(), ry.clone()),
        _ => {
            return Err(Error::InvalidCertificate(format!(
                "no common certificate for [{cx}] and [{cy}]"
            )));
        }
    };
    let mut last = None;
    for extra in 0..=16 {
        let n0 = base + extra * p;
        let attempt = PeriodCert::new(n0, p, rx.clone())
            .and_then(|c| x.recertify(c))
            .and_then(|xs| {
                PeriodCert::new(n0 + offset, p, ry.clone())
                    .and_then(|c| y.recertify(c))
                    .map(|ys| (xs, ys))
            });
        match attempt {
            Ok(pair) => return Ok(pair),
            Err(e) => last = Some(e),
        }
        if !matches!(rx, Rule::Stretch { .. }) {
            break;
        }
    }
    Err(last.expect("at least one attempt"))
}

impl fmt::Display for SeqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "system [{}] with {} explicit levels",
            self.cert,
            self.levels.len()
        )
    }
}

/// A diagram indexed by a finite filtered poset; transitions are given on
/// covering relations.
#[derive(Clone, Debug)]
pub struct FiniteDiagram {
    index: FinitePoset,
    objects: Vec<Sheaf>,
    transitions: BTreeMap<(usize, usize), SheafMorphism>,
    chain: Vec<usize>,
    system: Option<SeqSystem>,
}

impl FiniteDiagram {
    pub fn new(
        index: FinitePoset,
        objects: Vec<Sheaf>,
        transitions: BTreeMap<(usize, usize), SheafMorphism>,
    ) -> Result<FiniteDiagram> {
        let n = index.size();
        if objects.len() != n || n == 0 {
            return Err(Error::InvalidSheaf(
                "one object per index is required".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|k| index.leq(i, k) && index.leq(j, k)) {
                    return Err(Error::InvalidSheaf(format!(
                        "indices {i} and {j} have no upper bound"
                    )));
                }
            }
        }
        for &(a, b) in index.covers() {
            let t = transitions
                .get(&(a, b))
                .ok_or_else(|| Error::InvalidSheaf(format!("missing transition {a} -> {b}")))?;
            if !t.source().same_as(&objects[a]) || !t.target().same_as(&objects[b]) {
                return Err(Error::InvalidSheaf(format!(
                    "transition {a} -> {b} has the wrong ends"
                )));
            }
        }
        let mut d = FiniteDiagram {
            index,
            objects,
            transitions,
            chain: Vec::new(),
            system: None,
        };
        d.check_functorial()?;
        d.chain = d.cofinal_chain();
        let chain = d.chain.clone();
        let last = chain.len() - 1;
        let cert = PeriodCert::stationary(last);
        let at = |k: usize| chain[k.min(last)];
        d.system = Some(SeqSystem::generate(
            cert,
            |k| Ok(d.objects[at(k)].clone()),
            |k| Ok(d.map_between(at(k), at(k + 1))),
        )?);
        Ok(d)
    }

    /// Composite along any chain of covering relations from `i` to `j`.
    pub fn map_between(&self, i: usize, j: usize) -> SheafMorphism {
        if i == j {
            return SheafMorphism::identity(&self.objects[i]);
        }
        let &(_, k) = self
            .index
            .covers()
            .iter()
            .find(|&&(a, b)| a == i && self.index.leq(b, j))
            .expect("i <= j");
        self.map_between(k, j)
            .compose(&self.transitions[&(i, k)])
            .expect("composable")
    }

    fn check_functorial(&self) -> Result<()> {
        let n = self.index.size();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.index.leq(i, j) {
                    continue;
                }
                let via: Vec<SheafMorphism> = self
                    .index
                    .covers()
                    .iter()
                    .filter(|&&(a, b)| a == i && self.index.leq(b, j))
                    .map(|&(a, b)| {
                        self.map_between(b, j)
                            .compose(&self.transitions[&(a, b)])
                            .unwrap()
                    })
                    .collect();
                if via.windows(2).any(|w| !w[0].same_as(&w[1])) {
                    return Err(Error::InvalidSheaf(format!(
                        "paths from {i} to {j} disagree"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Starts at index 0 and repeatedly moves to the least index strictly
    /// above, ending at the greatest element.
    fn cofinal_chain(&self) -> Vec<usize> {
        let n = self.index.size();
        let mut chain = vec![0];
        loop {
            let cur = *chain.last().unwrap();
            match (0..n).find(|&k| k != cur && self.index.leq(cur, k)) {
                Some(k) => chain.push(k),
                None => return chain,
            }
        }
    }

    pub fn index(&self) -> &FinitePoset {
        &self.index
    }

    pub fn objects(&self) -> &[Sheaf] {
        &self.objects
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), SheafMorphism> {
        &self.transitions
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }
}

/// An ind-object `"lim" X_i`.
#[derive(Clone, Debug)]
pub enum IndObject {
    Diagram(Box<FiniteDiagram>),
    Seq(SeqSystem),
}

impl IndObject {
    /// The sequential system all computations run on; a finite diagram is
    /// replaced by its cofinal chain.
    pub fn system(&self) -> &SeqSystem {
        match self {
            IndObject::Diagram(d) => d.system.as_ref().expect("built in the constructor"),
            IndObject::Seq(s) => s,
        }
    }

    pub fn space(&self) -> &Space {
        self.system().space()
    }

    pub fn field(&self) -> Field {
        self.system().field()
    }

    pub fn level(&self, n: usize) -> Sheaf {
        self.system().level(n)
    }

    pub fn transition(&self, n: usize) -> SheafMorphism {
        self.system().transition(n)
    }

    pub fn cert(&self) -> &PeriodCert {
        self.system().cert()
    }

    /// Whether the object is (isomorphic to) a sheaf: transitions are
    /// eventually isomorphisms.
    pub fn is_representable(&self) -> bool {
        self.system().is_representable()
    }

    pub fn constant(f: &Sheaf) -> IndObject {
        IndObject::Seq(SeqSystem::constant(f))
    }
}

impl From<SeqSystem> for IndObject {
    fn from(s: SeqSystem) -> IndObject {
        IndObject::Seq(s)
    }
}

impl From<FiniteDiagram> for IndObject {
    fn from(d: FiniteDiagram) -> IndObject {
        IndObject::Diagram(Box::new(d))
    }
}
