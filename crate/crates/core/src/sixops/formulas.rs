//! The projection formula `f_!!(X ⊗ f⁻¹G) ≅ f_!!X ⊗ G` and base change
//! `g⁻¹ f_!! X ≅ f'_!! g'⁻¹ X` for cartesian squares of finite posets, in
//! their standard forms. Both sides are built and compared on every probe
//! `Hom(k_U, -)`.

use std::fmt;

use super::images::{inverse_image_ind, proper_direct_image_ind};
use super::tensor::tensor_ind;
use crate::error::{Error, Result};
use crate::indcat::{hom_from_sheaf, Dim, SeqSystem, Tag};
use crate::sheaf::Sheaf;
use crate::space::{CellMap, FinitePoset, MapKind, OpenSet, Space};

/// One probe of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeLine {
    pub probe: String,
    pub lhs: Dim,
    pub rhs: Dim,
    pub holds: bool,
}

/// Deterministic comparison report of two constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub form: String,
    pub lines: Vec<ProbeLine>,
    pub tag: Tag,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }

    /// The first failing probe.
    pub fn witness(&self) -> Option<&ProbeLine> {
        self.lines.iter().find(|l| !l.holds)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        writeln!(f, "# standard form: {}", self.form)?;
        for l in &self.lines {
            let v = if l.holds { "pass" } else { "fail" };
            writeln!(f, "probe {} lhs {} rhs {} {v}", l.probe, l.lhs, l.rhs)?;
        }
        match self.witness() {
            None => write!(f, "result pass [{}]", self.tag),
            Some(w) => write!(f, "result fail [{}] witness {}", self.tag, w.probe),
        }
    }
}

/// Every open set of a finite poset, in a fixed order.
pub fn probe_opens(space: &Space) -> Result<Vec<OpenSet>> {
    let Space::Poset(p) = space else {
        return Err(Error::Unsupported(
            "probes are enumerated on finite posets".into(),
        ));
    };
    let mut opens = OpenSet::whole(space).relatively_compact_opens(0);
    let key = |u: &OpenSet| {
        (0..p.size() as i64)
            .filter(|&c| u.contains(c))
            .collect::<Vec<_>>()
    };
    opens.sort_by_key(key);
    Ok(opens)
}

fn probe_name(space: &Space, u: &OpenSet) -> String {
    let Space::Poset(p) = space else {
        unreachable!("posets only")
    };
    let cells: Vec<String> = (0..p.size() as i64)
        .filter(|&c| u.contains(c))
        .map(|c| c.to_string())
        .collect();
    format!("U{{{}}}", cells.join(","))
}

fn compare(title: String, form: &str, lhs: &SeqSystem, rhs: &SeqSystem) -> Result<Report> {
    let space = lhs.space().clone();
    let mut lines = Vec::new();
    let mut tag = Tag::Exact;
    for u in probe_opens(&space)? {
        let k = Sheaf::constant_on_open(&u, lhs.field());
        let (a, b) = (hom_from_sheaf(&k, lhs)?, hom_from_sheaf(&k, rhs)?);
        tag = tag.meet(a.tag()).meet(b.tag());
        lines.push(ProbeLine {
            probe: probe_name(&space, &u),
            lhs: a.dim(),
            rhs: b.dim(),
            holds: a.dim() == b.dim(),
        });
    }
    Ok(Report {
        title,
        form: form.into(),
        lines,
        tag,
    })
}

fn poset_map(f: &CellMap) -> Result<()> {
    match (f.source(), f.target(), f.kind()) {
        (Space::Poset(_), Space::Poset(_), MapKind::Table(_)) => Ok(()),
        _ => Err(Error::Unsupported(
            "the formulas are checked on maps of finite posets".into(),
        )),
    }
}

/// `f_!!(X ⊗ f⁻¹G)` against `f_!!X ⊗ G`.
pub fn projection_formula_check(f: &CellMap, x: &SeqSystem, g: &SeqSystem) -> Result<Report> {
    poset_map(f)?;
    let lhs = proper_direct_image_ind(f, &tensor_ind(x, &inverse_image_ind(f, g)?)?)?;
    let rhs = tensor_ind(&proper_direct_image_ind(f, x)?, g)?;
    compare(
        "projection formula".into(),
        "f_!!(X ⊗ f⁻¹G) ≅ f_!!X ⊗ G",
        &lhs,
        &rhs,
    )
}

/// A commutative square `f ∘ g' = g ∘ f'` with `X'` the fiber product
/// `X ×_Y Y'`:
///
/// ```text
/// X' --g'--> X
/// |f'        |f
/// Y' --g---> Y
/// ```
#[derive(Clone, Debug)]
pub struct CartesianSquare {
    pub f: CellMap,
    pub g: CellMap,
    pub f_prime: CellMap,
    pub g_prime: CellMap,
}

fn table(f: &CellMap) -> &[i64] {
    match f.kind() {
        MapKind::Table(t) => t,
        _ => unreachable!("checked to be a poset map"),
    }
}

impl CartesianSquare {
    /// Completes `f: X -> Y` and `g: Y' -> Y` by the fiber product, whose
    /// cells are the pairs `(x, y')` with `f(x) = g(y')` ordered
    /// componentwise, listed lexicographically.
    pub fn fiber_product(f: &CellMap, g: &CellMap) -> Result<CartesianSquare> {
        poset_map(f)?;
        poset_map(g)?;
        if f.target() != g.target() {
            return Err(Error::NotCartesian(
                "the two maps have different targets".into(),
            ));
        }
        let (Space::Poset(px), Space::Poset(py)) = (f.source(), g.source()) else {
            unreachable!()
        };
        let (tf, tg) = (table(f), table(g));
        let pairs: Vec<(usize, usize)> = (0..px.size())
            .flat_map(|a| (0..py.size()).map(move |b| (a, b)))
            .filter(|&(a, b)| tf[a] == tg[b])
            .collect();
        let mut rel = Vec::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, d)) in pairs.iter().enumerate() {
                if i != j && px.leq(a, c) && py.leq(b, d) {
                    rel.push((i, j));
                }
            }
        }
        let product = Space::poset(FinitePoset::new(pairs.len(), &rel)?);
        let f_prime = CellMap::new(
            product.clone(),
            g.source().clone(),
            MapKind::Table(pairs.iter().map(|p| p.1 as i64).collect()),
        )?;
        let g_prime = CellMap::new(
            product,
            f.source().clone(),
            MapKind::Table(pairs.iter().map(|p| p.0 as i64).collect()),
        )?;
        Ok(CartesianSquare {
            f: f.clone(),
            g: g.clone(),
            f_prime,
            g_prime,
        })
    }

    /// Checks that the square commutes and that `X' -> X ×_Y Y'` is an
    /// isomorphism of posets.
    pub fn new(
        f: CellMap,
        g: CellMap,
        f_prime: CellMap,
        g_prime: CellMap,
    ) -> Result<CartesianSquare> {
        for m in [&f, &g, &f_prime, &g_prime] {
            poset_map(m)?;
        }
        if f.target() != g.target()
            || f_prime.source() != g_prime.source()
            || f_prime.target() != g.source()
            || g_prime.target() != f.source()
        {
            return Err(Error::NotCartesian("the maps do not form a square".into()));
        }
        let Space::Poset(p) = f_prime.source() else {
            unreachable!()
        };
        let (tf, tg, tf2, tg2) = (table(&f), table(&g), table(&f_prime), table(&g_prime));
        let n = p.size();
        if (0..n).any(|c| tf[tg2[c] as usize] != tg[tf2[c] as usize]) {
            return Err(Error::NotCartesian("the square does not commute".into()));
        }
        let reference = CartesianSquare::fiber_product(&f, &g)?;
        let Space::Poset(q) = reference.f_prime.source() else {
            unreachable!()
        };
        let pair = |c: usize| (tg2[c], tf2[c]);
        let mut seen: Vec<_> = (0..n).map(pair).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != n || n != q.size() {
            return Err(Error::NotCartesian(
                "X' is not in bijection with the fiber product".into(),
            ));
        }
        let (px, py) = match (f.source(), g.source()) {
            (Space::Poset(a), Space::Poset(b)) => (a, b),
            _ => unreachable!(),
        };
        for a in 0..n {
            for b in 0..n {
                let ((x1, y1), (x2, y2)) = (pair(a), pair(b));
                let product_order =
                    px.leq(x1 as usize, x2 as usize) && py.leq(y1 as usize, y2 as usize);
                if p.leq(a, b) != product_order {
                    return Err(Error::NotCartesian(
                        "X' does not carry the product order".into(),
                    ));
                }
            }
        }
        Ok(CartesianSquare {
            f,
            g,
            f_prime,
            g_prime,
        })
    }
}

/// `g⁻¹ f_!! X` against `f'_!! g'⁻¹ X`.
pub fn base_change_check(square: &CartesianSquare, x: &SeqSystem) -> Result<Report> {
    let s = square;
    let lhs = inverse_image_ind(&s.g, &proper_direct_image_ind(&s.f, x)?)?;
    let rhs = proper_direct_image_ind(&s.f_prime, &inverse_image_ind(&s.g_prime, x)?)?;
    compare(
        "base change".into(),
        "g⁻¹ f_!! X ≅ f'_!! g'⁻¹ X",
        &lhs,
        &rhs,
    )
}
