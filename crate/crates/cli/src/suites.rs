//! Seeded property suites. Each suite draws its instances from a ChaCha
//! stream keyed by the seed and the suite name, so a report depends on
//! nothing but the configuration.

use std::fmt;

use indsheaf::extend::{check_mv, extend, PresheafOnT};
use indsheaf::indcat::{
    alpha, alpha_morphism, alpha_transpose, beta, beta_closed_counit, beta_open_counit, cokernel,
    free_growth, hom_from_sheaf_with, hom_ind_with, iota, iota_morphism, is_exact,
    is_ind_zero_with, is_iso, kernel, receding_rays, vertex_kernel, Dim, IndMorphism, SeqSystem,
    Tag,
};
use indsheaf::linalg::{Field, LinearMap, Scalar};
use indsheaf::random;
use indsheaf::sheaf::{inverse_image, Presentation, PresentationStyle, Sheaf};
use indsheaf::sixops::{
    base_change_check, direct_image_ind, hom_presheaf, ihom_ind, inverse_image_ind,
    inverse_image_ind_morphism, probe_opens, projection_formula_check, proper_comparison, restrict,
    tensor_ind, CartesianSquare, Report,
};
use indsheaf::space::{vertex, CellMap, CellSet, OpenSet, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::oracle::{table, Brute};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub field: Field,
    pub seed: u64,
    pub trunc: usize,
}

/// One property checked on a number of instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteLine {
    pub label: String,
    pub passed: usize,
    pub total: usize,
    /// The first failing instance, if any.
    pub witness: Option<String>,
}

impl SuiteLine {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub lines: Vec<SuiteLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(SuiteLine::ok)
    }

    pub fn line(&self, label: &str) -> Option<&SuiteLine> {
        self.lines.iter().find(|l| l.label == label)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# suite {}", self.name)?;
        for l in &self.lines {
            write!(
                f,
                "{} {}/{} {}",
                l.label,
                l.passed,
                l.total,
                if l.ok() { "pass" } else { "fail" }
            )?;
            if let Some(w) = &l.witness {
                write!(f, " (first failure: {w})")?;
            }
            writeln!(f)?;
        }
        write!(f, "result {}", if self.passed() { "pass" } else { "fail" })
    }
}

pub const SUITES: &[&str] = &[
    "examples",
    "iab",
    "ktilde",
    "abelian",
    "sixops",
    "extend",
    "glueing",
    "adjunctions",
];

/// Runs one suite, or every suite in order for `all`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if name == "all" {
        let mut lines = Vec::new();
        for s in SUITES {
            let r = run_suite(s, cfg)?;
            lines.extend(r.lines.into_iter().map(|l| SuiteLine {
                label: format!("{s}/{}", l.label),
                ..l
            }));
        }
        return Ok(SuiteReport {
            name: "all".into(),
            lines,
        });
    }
    let mut s = Suite::new(name, cfg);
    match name {
        "examples" => examples(&mut s)?,
        "iab" => iab(&mut s)?,
        "ktilde" => ktilde(&mut s)?,
        "abelian" => abelian(&mut s)?,
        "sixops" => sixops(&mut s)?,
        "extend" => extension(&mut s)?,
        "glueing" => glueing(&mut s)?,
        "adjunctions" => adjunctions(&mut s)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown suite `{other}` (known: all, {})",
                SUITES.join(", ")
            )))
        }
    }
    Ok(SuiteReport {
        name: name.into(),
        lines: s.lines,
    })
}

struct Suite {
    rng: ChaCha8Rng,
    field: Field,
    trunc: usize,
    lines: Vec<SuiteLine>,
}

impl Suite {
    fn new(name: &str, cfg: &SuiteConfig) -> Suite {
        // FNV-1a of the name keeps suites independent of each other
        let salt = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
        Suite {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ salt),
            field: cfg.field,
            trunc: cfg.trunc,
            lines: Vec::new(),
        }
    }

    /// Records one instance of `label`; errors count as failures.
    fn record(&mut self, label: &str, outcome: Result<bool>, instance: impl FnOnce() -> String) {
        let idx = match self.lines.iter().position(|l| l.label == label) {
            Some(i) => i,
            None => {
                self.lines.push(SuiteLine {
                    label: label.into(),
                    passed: 0,
                    total: 0,
                    witness: None,
                });
                self.lines.len() - 1
            }
        };
        let line = &mut self.lines[idx];
        line.total += 1;
        match outcome {
            Ok(true) => line.passed += 1,
            Ok(false) if line.witness.is_none() => line.witness = Some(instance()),
            Err(e) if line.witness.is_none() => {
                line.witness = Some(format!("{} ({e})", instance()))
            }
            _ => {}
        }
    }

    fn poset(&mut self, max: usize) -> Space {
        Space::poset(random::poset(&mut self.rng, max))
    }

    fn sheaf(&mut self, space: &Space, field: Field, bound: i64) -> Sheaf {
        random::sheaf(&mut self.rng, space, field, bound, true)
    }

    fn zero_test(&self, x: &SeqSystem) -> Result<bool> {
        Ok(is_ind_zero_with(x, self.trunc)?.holds)
    }

    fn hom_dim(&self, x: &SeqSystem, y: &SeqSystem) -> Result<Dim> {
        Ok(hom_ind_with(x, y, self.trunc)?.dim())
    }
}

fn finite(d: Dim) -> Result<usize> {
    d.finite()
        .ok_or_else(|| CliError::Config("unexpected infinite Hom".into()))
}

/// The other field of the pair the ι/α/β criteria range over.
fn fields(primary: Field) -> [Field; 2] {
    let f5 = Field::Prime(5);
    if primary == f5 {
        [f5, Field::Rationals]
    } else {
        [primary, f5]
    }
}

/// Stalk dimensions agree on every cell of either window and on the tails.
fn same_dims(a: &Sheaf, b: &Sheaf) -> bool {
    let ((l1, h1), (l2, h2)) = (a.window(), b.window());
    (l1.min(l2)..=h1.max(h2)).all(|c| a.dim(c) == b.dim(c)) && a.tails() == b.tails()
}

fn examples(s: &mut Suite) -> Result<()> {
    let field = s.field;
    let x = free_growth(field)?;
    let k = Sheaf::constant(&Space::point(), field, 1);
    let c = hom_from_sheaf_with(&k, &x, 0, s.trunc)?;
    s.record(
        "growth_hom_is_infinite_certified",
        Ok(c.dim() == Dim::Infinite && c.tag() == Tag::Certified),
        || format!("dim = {} [{}]", c.dim(), c.tag()),
    );
    s.record(
        "growth_not_representable",
        Ok(!x.is_representable()),
        || "declared representable".into(),
    );

    let g = receding_rays(field)?;
    for _ in 0..10 {
        let u = random::nonempty_bounded_open(&mut s.rng, &Space::Line, 6);
        let r = restrict(&g, &u)
            .map_err(CliError::from)
            .and_then(|y| s.zero_test(&y));
        s.record("rays_vanish_on_bounded_opens", r, || u.to_string());
    }
    let c = hom_from_sheaf_with(&Sheaf::constant(&Space::Line, field, 1), &g, 0, s.trunc)?;
    s.record(
        "rays_hom_from_k_x_is_one",
        Ok(c.dim() == Dim::Finite(1) && c.tag() == Tag::Exact),
        || format!("dim = {} [{}]", c.dim(), c.tag()),
    );
    Ok(())
}

/// Rank of `a ↦ coords(post ∘ a)` over a basis of the source Hom.
fn rank_of(cols: Vec<Vec<Scalar>>, field: Field, rows: usize) -> usize {
    LinearMap::from_columns(field, rows, &cols).rank()
}

fn iab(s: &mut Suite) -> Result<()> {
    for field in fields(s.field) {
        for i in 0..30 {
            let space = if i % 3 == 0 { Space::Line } else { s.poset(5) };
            let (f, g) = (s.sheaf(&space, field, 2), s.sheaf(&space, field, 2));
            let tag = || format!("{field} instance {i}");
            let r = iota(&f).and_then(|x| alpha(&x)).map(|a| a.same_as(&f));
            s.record("alpha_iota_is_identity", r.map_err(Into::into), tag);
            let r =
                (|| Ok(s.hom_dim(&iota(&f)?, &iota(&g)?)? == Dim::Finite(f.hom_space(&g)?.dim())))(
                );
            s.record("iota_fully_faithful", r, tag);
            if space.is_line() {
                // relatively compact opens of the line are not stars; see the ledger
                continue;
            }
            let r = beta(&f).and_then(|b| alpha(&b)).map(|a| a.same_as(&f));
            s.record("alpha_beta_is_identity", r.map_err(Into::into), tag);
            let (y1, y2) = (s.sheaf(&space, field, 2), s.sheaf(&space, field, 2));
            let x = random::stationary_system(&mut s.rng, &y1, &y2);
            let a = s.sheaf(&space, field, 2);
            let r = beta_alpha_natural(s, &f, &x, &a);
            s.record("beta_alpha_adjunction", r, tag);
            let g2 = s.sheaf(&space, field, 2);
            let r = alpha_iota_natural(s, &x, &g, &g2);
            s.record("alpha_iota_adjunction", r, tag);
        }
    }
    Ok(())
}

/// `Hom(βF, X) ≅ Hom(F, αX)` in dimension, and the maps induced by a
/// morphism `u: X -> ιA` have equal rank on both sides.
fn beta_alpha_natural(s: &mut Suite, f: &Sheaf, x: &SeqSystem, a: &Sheaf) -> Result<bool> {
    let field = f.field();
    let bf = beta(f)?;
    let ax = alpha(x)?;
    let left = hom_ind_with(&bf, x, s.trunc)?;
    let right = f.hom_space(&ax)?;
    if finite(left.dim())? != right.dim() {
        return Ok(false);
    }
    let t = random::morphism(&mut s.rng, &ax, a);
    let u = alpha_transpose(&t, x)?;
    let ia = iota(a)?;
    let left2 = hom_ind_with(&bf, &ia, s.trunc)?;
    let mut cols = Vec::new();
    for v in left.lim().basis() {
        cols.push(left2.class_of(&left.morphism(v)?.then(&u)?)?);
    }
    let lrank = rank_of(cols, field, left2.colim().dim().finite().unwrap_or(0));
    let au = alpha_morphism(&u)?;
    let right2 = f.hom_space(a)?;
    let mut cols = Vec::new();
    for m in right.basis() {
        cols.push(right2.coordinates(&au.compose(m)?)?);
    }
    Ok(lrank == rank_of(cols, field, right2.dim()))
}

/// `Hom(αX, G) ≅ Hom(X, ιG)` in dimension, and transposition commutes
/// with postcomposition by `h: G -> G2`.
fn alpha_iota_natural(s: &mut Suite, x: &SeqSystem, g: &Sheaf, g2: &Sheaf) -> Result<bool> {
    let ax = alpha(x)?;
    if Dim::Finite(ax.hom_space(g)?.dim()) != s.hom_dim(x, &iota(g)?)? {
        return Ok(false);
    }
    let h = random::morphism(&mut s.rng, g, g2);
    let a = random::morphism(&mut s.rng, &ax, g);
    let lhs = alpha_transpose(&h.compose(&a)?, x)?;
    let rhs = alpha_transpose(&a, x)?.then(&iota_morphism(&h)?)?;
    Ok(lhs.equals(&rhs)?.holds)
}

fn ktilde(s: &mut Suite) -> Result<()> {
    let field = s.field;
    for i in 0..10 {
        let u = random::open(&mut s.rng, &Space::Line, 4, i % 2 == 0);
        let r = (|| s.zero_test(&kernel(&beta_open_counit(&u, field)?)?.object))();
        s.record("tilde_open_is_mono", r, || u.to_string());
    }
    for _ in 0..10 {
        let c = random::closed(&mut s.rng, &Space::Line, 4);
        let r =
            (|| s.zero_test(&cokernel(&beta_closed_counit(&c, &Space::Line, field)?)?.object))();
        s.record("tilde_closed_is_epi", r, || c.to_string());
    }
    let a = s.rng.gen_range(-3..=3);
    let (n_a, inc) = vertex_kernel(a, field)?;
    let r = s.zero_test(&n_a).map(|z| !z);
    s.record("vertex_kernel_nonzero", r, || format!("a = {a}"));
    let r = (|| {
        let pt = CellSet::from_cells(&Space::Line, [vertex(a)])?;
        let counit = beta_closed_counit(&pt, &Space::Line, field)?;
        let zero_of = |x: &SeqSystem| SeqSystem::constant(&Sheaf::zero(x.space(), x.field()));
        let target = counit.target().clone();
        let pieces = [
            (IndMorphism::zero(&zero_of(&n_a), &n_a)?, inc.clone()),
            (inc.clone(), counit.clone()),
            (
                counit.clone(),
                IndMorphism::zero(&target, &zero_of(&target))?,
            ),
        ];
        let mut ok = true;
        for (f, g) in &pieces {
            let e = is_exact(f, g)?;
            ok &= e.verdict().holds && !e.disagree();
        }
        Ok(ok)
    })();
    s.record("vertex_kernel_sequence_exact", r, || format!("a = {a}"));
    Ok(())
}

/// `{t in Hom(W, X) : φ t = 0}` has the dimension of `Hom(W, ker φ)`.
fn kernel_probe(s: &Suite, phi: &IndMorphism, k: &SeqSystem, w: &SeqSystem) -> Result<bool> {
    let hx = hom_ind_with(w, phi.source(), s.trunc)?;
    let hy = hom_ind_with(w, phi.target(), s.trunc)?;
    let mut cols = Vec::new();
    for v in hx.lim().basis() {
        cols.push(hy.class_of(&hx.morphism(v)?.then(phi)?)?);
    }
    let n = hx.lim().dim();
    let rank = rank_of(
        cols,
        phi.source().field(),
        hy.colim().dim().finite().unwrap_or(0),
    );
    Ok(Dim::Finite(n - rank) == s.hom_dim(w, k)?)
}

/// `{s in Hom(ιG, ιV) : s φ = 0}` has the dimension of `Hom(coker φ, ιV)`.
fn cokernel_probe(
    s: &Suite,
    phi: &IndMorphism,
    g: &Sheaf,
    c: &SeqSystem,
    v: &Sheaf,
) -> Result<bool> {
    let hs = g.hom_space(v)?;
    let iv = iota(v)?;
    let hx = hom_ind_with(phi.source(), &iv, s.trunc)?;
    let mut cols = Vec::new();
    for m in hs.basis() {
        cols.push(hx.class_of(&phi.then(&iota_morphism(m)?)?)?);
    }
    let rank = rank_of(cols, g.field(), hx.colim().dim().finite().unwrap_or(0));
    Ok(Dim::Finite(hs.dim() - rank) == s.hom_dim(c, &iv)?)
}

/// `αK -> αX -> αG` is left exact and `αX -> αG -> αC -> 0` is right exact.
fn alpha_exact(k: &IndMorphism, phi: &IndMorphism, c: &IndMorphism) -> Result<bool> {
    let (ak, af, ac) = (alpha_morphism(k)?, alpha_morphism(phi)?, alpha_morphism(c)?);
    let ker = af.kernel()?.object;
    let coker = af.cokernel()?.object;
    Ok(ak.is_mono()
        && af.compose(&ak)?.is_zero()
        && same_dims(&ker, ak.source())
        && ac.is_epi()
        && ac.compose(&af)?.is_zero()
        && same_dims(&coker, ac.target()))
}

fn abelian(s: &mut Suite) -> Result<()> {
    let mut done = 0;
    while done < 100 {
        let field = fields(s.field)[done % 2];
        let on_line = done % 5 == 4;
        let space = if on_line { Space::Line } else { s.poset(4) };
        let (a, b, g) = (
            s.sheaf(&space, field, 1),
            s.sheaf(&space, field, 1),
            s.sheaf(&space, field, 1),
        );
        let phi = if on_line {
            let m = random::morphism(&mut s.rng, &a, &g);
            iota_morphism(&m)?
        } else {
            let x = random::stationary_system(&mut s.rng, &a, &b);
            let m = random::morphism(&mut s.rng, &alpha(&x)?, &g);
            alpha_transpose(&m, &x)?
        };
        let (w, v) = (s.sheaf(&space, field, 1), s.sheaf(&space, field, 1));
        let tag = || format!("{field} instance {done}");
        let ker = kernel(&phi)?;
        let coker = cokernel(&phi)?;
        let r = ker
            .inclusion
            .then(&phi)
            .and_then(|m| m.is_zero_with(s.trunc))
            .map(|v| v.holds);
        s.record("kernel_composite_zero", r.map_err(Into::into), tag);
        let r = phi
            .then(&coker.projection)
            .and_then(|m| m.is_zero_with(s.trunc))
            .map(|v| v.holds);
        s.record("cokernel_composite_zero", r.map_err(Into::into), tag);
        let r = iota(&w)
            .map_err(CliError::from)
            .and_then(|w| kernel_probe(s, &phi, &ker.object, &w));
        s.record("kernel_universal_probe", r, tag);
        let r = cokernel_probe(s, &phi, &g, &coker.object, &v);
        s.record("cokernel_universal_probe", r, tag);
        // 0 -> K -> X -> X/K -> 0
        let r = (|| {
            let quot = cokernel(&ker.inclusion)?;
            let zero_of = |y: &SeqSystem| SeqSystem::constant(&Sheaf::zero(y.space(), y.field()));
            let pieces = [
                (
                    IndMorphism::zero(&zero_of(&ker.object), &ker.object)?,
                    ker.inclusion.clone(),
                ),
                (ker.inclusion.clone(), quot.projection.clone()),
                (
                    quot.projection.clone(),
                    IndMorphism::zero(&quot.object, &zero_of(&quot.object))?,
                ),
                (ker.inclusion.clone(), phi.clone()),
                (phi.clone(), coker.projection.clone()),
            ];
            let (mut exact, mut agree) = (true, true);
            for (f, g) in &pieces {
                let e = is_exact(f, g)?;
                exact &= e.homology.holds;
                agree &= !e.disagree();
            }
            Ok((exact, agree))
        })();
        s.record(
            "short_sequence_exact",
            r.as_ref()
                .map(|p| p.0)
                .map_err(|e: &CliError| CliError::Config(e.to_string())),
            tag,
        );
        s.record("homology_and_lifting_agree", r.map(|p| p.1), tag);
        let r = alpha_exact(&ker.inclusion, &phi, &coker.projection);
        s.record("alpha_exact", r, tag);
        done += 1;
    }
    Ok(())
}

fn cells(space: &Space, u: &OpenSet) -> Vec<usize> {
    let n = space.as_poset().map_or(0, |p| p.size());
    (0..n).filter(|&c| u.contains(c as i64)).collect()
}

/// Every probe line of a library report equals the brute-force sections
/// of both sides, and every line holds.
fn oracle_agrees(report: &Report, space: &Space, lhs: &Brute, rhs: &Brute) -> Result<bool> {
    let probes = probe_opens(space)?;
    if report.lines.len() != probes.len() {
        return Ok(false);
    }
    Ok(report.lines.iter().zip(&probes).all(|(line, u)| {
        let w = cells(space, u);
        line.lhs == Dim::Finite(lhs.sections_dim(&w))
            && line.rhs == Dim::Finite(rhs.sections_dim(&w))
            && line.holds
    }))
}

fn sixops(s: &mut Suite) -> Result<()> {
    let field = s.field;
    let mut done = 0;
    while done < 50 {
        let p = s.poset(6);
        let (a, b, c, d, e) = (
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
        );
        let x = random::stationary_system(&mut s.rng, &a, &b);
        let y = random::stationary_system(&mut s.rng, &c, &d);
        let r = (|| {
            let k = iota(&e)?;
            Ok(s.hom_dim(&tensor_ind(&x, &k)?, &y)? == s.hom_dim(&x, &ihom_ind(&k, &y)?)?)
        })();
        s.record("tensor_ihom_adjunction", r, || format!("instance {done}"));
        done += 1;
    }
    let mut done = 0;
    while done < 50 {
        let (p, q) = (s.poset(6), s.poset(4));
        let Some(f) = random::monotone_map(&mut s.rng, &p, &q) else {
            continue;
        };
        let (a, b) = (s.sheaf(&q, field, 0), s.sheaf(&q, field, 0));
        let g = random::stationary_system(&mut s.rng, &a, &b);
        let xs = s.sheaf(&p, field, 0);
        let r = (|| {
            let x = iota(&xs)?;
            Ok(s.hom_dim(&inverse_image_ind(&f, &g)?, &x)?
                == s.hom_dim(&g, &direct_image_ind(&f, &x)?)?)
        })();
        s.record("pullback_push_adjunction", r, || format!("instance {done}"));
        done += 1;
    }
    for i in 0..10 {
        let p = s.poset(5);
        let (f, g) = (s.sheaf(&p, field, 0), s.sheaf(&p, field, 0));
        let r = (|| {
            let a = alpha(&ihom_ind(&iota(&f)?, &iota(&g)?)?)?;
            let h = f.hom_sheaf(&g)?;
            let mut ok = true;
            for u in probe_opens(&p)? {
                ok &= a.sections(&u)?.dim() == h.sections(&u)?.dim();
            }
            Ok(ok)
        })();
        s.record("alpha_ihom_is_hom", r, || format!("instance {i}"));
    }
    let mut done = 0;
    while done < 10 {
        let (p, q) = (s.poset(5), s.poset(3));
        let Some(f) = random::monotone_map(&mut s.rng, &p, &q) else {
            continue;
        };
        let (a, b) = (s.sheaf(&q, field, 0), s.sheaf(&q, field, 0));
        let phi = random::morphism(&mut s.rng, &a, &b);
        let r = (|| {
            let k = phi.kernel()?;
            let im = phi.image()?;
            let i = inverse_image_ind_morphism(&f, &iota_morphism(&k.inclusion)?)?;
            let e = inverse_image_ind_morphism(&f, &iota_morphism(&im.coimage_map)?)?;
            // levelwise the pulled-back sheaf sequence is exact as well
            let sheafwise = inverse_image(&f, &k.object)?;
            Ok(is_exact(&i, &e)?.verdict().holds && same_dims(&sheafwise, &alpha(i.source())?))
        })();
        s.record("pullback_exact", r, || format!("instance {done}"));
        done += 1;
    }
    let pt = Space::point();
    let r = (|| {
        let f = CellMap::constant(&Space::Line, &pt, 0)?;
        let c = proper_comparison(&f, &Sheaf::constant(&Space::Line, field, 1))?;
        Ok(!is_iso(&c)?.holds)
    })();
    s.record("proper_comparison_not_iso_on_k_x", r, || {
        "line -> point, F = k_X: both ends are 0".into()
    });

    let mut done = 0;
    while done < 100 {
        let x = s.poset(6);
        let y = s.poset(4);
        let Some(f) = random::monotone_map(&mut s.rng, &x, &y) else {
            continue;
        };
        let fld = fields(field)[done % 2];
        let (a, b) = (s.sheaf(&x, fld, 0), s.sheaf(&y, fld, 0));
        let r = (|| {
            let report = projection_formula_check(&f, &iota(&a)?, &iota(&b)?)?;
            let t = table(&f);
            let (ba, bb) = (Brute::from_sheaf(&a), Brute::from_sheaf(&b));
            let lhs = ba.tensor(&bb.pull(&t, &x)).push_proper(&t, &y);
            let rhs = ba.push_proper(&t, &y).tensor(&bb);
            oracle_agrees(&report, &y, &lhs, &rhs)
        })();
        s.record("projection_formula", r, || format!("instance {done}"));
        done += 1;
    }
    let mut done = 0;
    while done < 100 {
        let (x, y, y2) = (s.poset(6), s.poset(3), s.poset(3));
        let (Some(f), Some(g)) = (
            random::monotone_map(&mut s.rng, &x, &y),
            random::monotone_map(&mut s.rng, &y2, &y),
        ) else {
            continue;
        };
        let a = s.sheaf(&x, field, 0);
        let r = (|| {
            let sq = CartesianSquare::fiber_product(&f, &g)?;
            let report = base_change_check(&sq, &iota(&a)?)?;
            let ba = Brute::from_sheaf(&a);
            let lhs = ba.push_proper(&table(&f), &y).pull(&table(&g), &y2);
            let x2 = sq.g_prime.source().clone();
            let rhs = ba
                .pull(&table(&sq.g_prime), &x2)
                .push_proper(&table(&sq.f_prime), &y2);
            oracle_agrees(&report, &y2, &lhs, &rhs)
        })();
        s.record("base_change", r, || format!("instance {done}"));
        done += 1;
    }
    Ok(())
}

fn any_space(s: &mut Suite) -> Space {
    if s.rng.gen_bool(0.5) {
        Space::Line
    } else {
        s.poset(5)
    }
}

fn extension(s: &mut Suite) -> Result<()> {
    let field = s.field;
    for i in 0..5 {
        let sp = any_space(s);
        let pairs: Vec<(OpenSet, OpenSet)> = (0..10)
            .map(|_| {
                (
                    random::open(&mut s.rng, &sp, 3, true),
                    random::open(&mut s.rng, &sp, 3, true),
                )
            })
            .collect();
        let report = check_mv(&PresheafOnT::cell_functions(&sp, field), &pairs)?;
        for l in &report.lines {
            s.record("cell_functions_mayer_vietoris", Ok(l.holds()), || {
                format!("space {i}: U{} V{}", l.u, l.v)
            });
        }
    }
    for _ in 0..30 {
        let sp = any_space(s);
        let u = random::nonempty_bounded_open(&mut s.rng, &sp, 3);
        let r = (|| {
            let f = extend(&PresheafOnT::cell_functions(&sp, field));
            let n = u
                .cells()
                .cardinality()
                .ok_or_else(|| CliError::Config("unbounded".into()))?;
            Ok(f.evaluate(&Sheaf::constant_on_open(&u, field))?.dim() == n)
        })();
        s.record("hom_from_k_u_counts_cells", r, || u.to_string());
    }
    for i in 0..30 {
        let sp = any_space(s);
        let g = s.sheaf(&sp, field, 3);
        let r = (|| {
            let f = extend(&PresheafOnT::bounded_cell_functions(&sp, field, 3));
            let a = f.evaluate_with(&g, PresentationStyle::Minimal)?.dim();
            let b = f.evaluate_with(&g, PresentationStyle::Full)?.dim();
            let c = f
                .evaluate_presented(&Presentation::by_stars(&g, PresentationStyle::Full)?)?
                .dim();
            Ok(a == b && b == c)
        })();
        s.record("presentation_independence", r, || format!("instance {i}"));
    }
    for i in 0..20 {
        let sp = any_space(s);
        let t = s.sheaf(&sp, field, 2);
        let (a, b) = (s.sheaf(&sp, field, 2), s.sheaf(&sp, field, 2));
        let phi = random::morphism(&mut s.rng, &a, &b);
        let r = (|| {
            let f = extend(&PresheafOnT::sections(&t));
            // 0 -> ker φ -> A -> im φ -> 0 goes to F⁺(im) -> F⁺(A) -> F⁺(ker), exact on the left
            let ker = phi.kernel()?;
            let im = phi.image()?;
            let onto = f.evaluate_morphism(&im.coimage_map)?.map;
            let into = f.evaluate_morphism(&ker.inclusion)?.map;
            Ok(onto.is_injective()
                && into.compose(&onto)?.is_zero()
                && onto.rank() == into.kernel().dim())
        })();
        s.record("evaluate_left_exact", r, || format!("instance {i}"));
    }
    Ok(())
}

fn glueing(s: &mut Suite) -> Result<()> {
    let field = s.field;
    for i in 0..25 {
        let p = s.poset(5);
        let (a, b, c) = (
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
            s.sheaf(&p, field, 0),
        );
        let x = random::stationary_system(&mut s.rng, &a, &b);
        let opens = probe_opens(&p)?;
        let n = s.rng.gen_range(2..=3);
        let cover: Vec<OpenSet> = (0..n)
            .map(|_| opens[s.rng.gen_range(0..opens.len())].clone())
            .collect();
        let r = (|| {
            let g = hom_presheaf(&x, &iota(&c)?).check_glueing(&cover)?;
            Ok(g.verdict.holds)
        })();
        s.record("hom_presheaf_equalizer", r, || format!("instance {i}"));
    }
    Ok(())
}

fn adjunctions(s: &mut Suite) -> Result<()> {
    let field = s.field;
    for i in 0..20 {
        let p = s.poset(5);
        let (f, g, g2) = (
            s.sheaf(&p, field, 2),
            s.sheaf(&p, field, 2),
            s.sheaf(&p, field, 2),
        );
        let (y1, y2) = (s.sheaf(&p, field, 2), s.sheaf(&p, field, 2));
        let x = random::stationary_system(&mut s.rng, &y1, &y2);
        let a = s.sheaf(&p, field, 2);
        let r = beta_alpha_natural(s, &f, &x, &a);
        s.record("beta_alpha", r, || format!("instance {i}"));
        let r = alpha_iota_natural(s, &x, &g, &g2);
        s.record("alpha_iota", r, || format!("instance {i}"));
        let e = s.sheaf(&p, field, 0);
        let r = (|| {
            let k = iota(&e)?;
            let y = iota(&g)?;
            Ok(s.hom_dim(&tensor_ind(&x, &k)?, &y)? == s.hom_dim(&x, &ihom_ind(&k, &y)?)?)
        })();
        s.record("tensor_ihom", r, || format!("instance {i}"));
    }
    let mut done = 0;
    while done < 20 {
        let (p, q) = (s.poset(5), s.poset(4));
        let Some(f) = random::monotone_map(&mut s.rng, &p, &q) else {
            continue;
        };
        let (a, b) = (s.sheaf(&q, field, 0), s.sheaf(&q, field, 0));
        let g = random::stationary_system(&mut s.rng, &a, &b);
        let xs = s.sheaf(&p, field, 0);
        let r = (|| {
            let x = iota(&xs)?;
            Ok(s.hom_dim(&inverse_image_ind(&f, &g)?, &x)?
                == s.hom_dim(&g, &direct_image_ind(&f, &x)?)?)
        })();
        s.record("pullback_push", r, || format!("instance {done}"));
        done += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SuiteConfig {
        SuiteConfig {
            field: Field::Rationals,
            seed: 4,
            trunc: 16,
        }
    }

    #[test]
    fn fields_pair_the_primary_with_f5() {
        assert_eq!(
            fields(Field::Rationals),
            [Field::Rationals, Field::Prime(5)]
        );
        assert_eq!(fields(Field::Prime(5)), [Field::Prime(5), Field::Rationals]);
        assert_eq!(fields(Field::Prime(3)), [Field::Prime(3), Field::Prime(5)]);
    }

    #[test]
    fn records_keep_the_first_witness() {
        let mut s = Suite::new("x", &cfg());
        s.record("p", Ok(true), || unreachable!());
        s.record("p", Ok(false), || "first".into());
        s.record("p", Err(CliError::Config("boom".into())), || {
            "second".into()
        });
        let line = &s.lines[0];
        assert_eq!((line.passed, line.total), (1, 3));
        assert_eq!(line.witness.as_deref(), Some("first"));
        let r = SuiteReport {
            name: "x".into(),
            lines: s.lines,
        };
        assert_eq!(
            r.to_string(),
            "# suite x\np 1/3 fail (first failure: first)\nresult fail"
        );
    }

    #[test]
    fn suites_depend_on_name_and_seed() {
        let (a, b) = (Suite::new("a", &cfg()), Suite::new("b", &cfg()));
        assert_ne!(a.rng.get_seed(), b.rng.get_seed());
        let other = SuiteConfig { seed: 5, ..cfg() };
        assert_ne!(Suite::new("a", &other).rng.get_seed(), a.rng.get_seed());
    }

    #[test]
    fn dimension_comparison_covers_both_windows() {
        let q = Field::Rationals;
        let a = Sheaf::constant_on_open(&OpenSet::interval(0, 2), q);
        let b = Sheaf::constant_on_open(&OpenSet::interval(0, 3), q);
        assert!(same_dims(&a, &a));
        assert!(!same_dims(&a, &b));
        assert!(!same_dims(&b, &a));
    }

    #[test]
    fn unknown_suites_are_errors() {
        assert!(run_suite("nope", &cfg()).is_err());
    }

    #[test]
    fn glueing_suite_passes() {
        let r = run_suite("glueing", &cfg()).unwrap();
        assert!(r.passed(), "{r}");
    }
}
