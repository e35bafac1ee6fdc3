//! Constructible sheaves of finite-dimensional vector spaces.
//!
//! On an Alexandrov space a sheaf is a covariant functor on the cell poset:
//! a stalk at every cell and a generization map `F_c -> F_d` for every
//! covering relation `c < d`. Sections over an open `U` are the limit over the
//! cells of `U`.
//!
//! On the line a sheaf is described by a finite window of cells plus a tail
//! on each side. A tail of dimension `d` means every cell beyond the window
//! has stalk `k^d` and all generization maps between tail cells are the
//! identity; dimension zero is the zero tail. Maps between the window and the
//! first tail cell are stored explicitly.

mod functors;
mod model;
mod morphism;
mod ops;
mod presentation;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Field, LinearMap, Scalar, Subspace};
use crate::space::{is_vertex, Cell, LocallyClosedSet, OpenSet, Space};

pub use functors::{
    direct_image, inverse_image, inverse_image_morphism, proper_direct_image, proper_inclusion,
    pushforward_morphism,
};
pub(crate) use model::Model;
pub use morphism::{HomSpace, SheafMorphism};
pub use ops::{biproduct, stretch_source, Cokernel, Image, Kernel};
pub use presentation::{Presentation, PresentationStyle};

#[derive(Clone, Debug)]
pub struct Sheaf {
    space: Space,
    field: Field,
    lo: Cell,
    hi: Cell,
    stalks: Vec<usize>,
    maps: BTreeMap<(Cell, Cell), LinearMap>,
    left: usize,
    right: usize,
}

/// Covering relations `(c, d)`, `c < d`, with at least one end in `lo..=hi`.
pub(crate) fn covers_touching(space: &Space, lo: Cell, hi: Cell) -> Vec<(Cell, Cell)> {
    match space {
        Space::Poset(p) => p
            .covers()
            .iter()
            .map(|&(a, b)| (a as Cell, b as Cell))
            .collect(),
        Space::Line => {
            let mut out = Vec::new();
            for v in (lo - 1)..=(hi + 1) {
                if !is_vertex(v) {
                    continue;
                }
                for e in [v - 1, v + 1] {
                    let inside = |c: Cell| c >= lo && c <= hi;
                    if inside(v) || inside(e) {
                        out.push((v, e));
                    }
                }
            }
            out
        }
    }
}

impl Sheaf {
    /// Builds a sheaf from explicit data, checking shapes and functoriality.
    /// On a poset `lo..=hi` must be all cells and the tails zero.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        space: Space,
        field: Field,
        lo: Cell,
        hi: Cell,
        stalks: Vec<usize>,
        maps: BTreeMap<(Cell, Cell), LinearMap>,
        left: usize,
        right: usize,
    ) -> Result<Sheaf> {
        if let Space::Poset(p) = &space {
            if lo != 0 || hi != p.size() as Cell - 1 || left != 0 || right != 0 {
                return Err(Error::InvalidSheaf(
                    "poset sheaves list every cell and have no tails".into(),
                ));
            }
        } else if lo > hi {
            return Err(Error::InvalidSheaf(
                "line sheaves need a nonempty window".into(),
            ));
        }
        if stalks.len() as i64 != hi - lo + 1 {
            return Err(Error::InvalidSheaf(
                "stalk list does not match the window".into(),
            ));
        }
        let sheaf = Sheaf {
            space,
            field,
            lo,
            hi,
            stalks,
            maps,
            left,
            right,
        };
        sheaf.validate()?;
        Ok(sheaf)
    }

    /// Builds a sheaf by evaluating `dim` and `gen` on a finite range of
    /// cells. On the line, `range = (l, r)` and the cells `l` and `r` are the
    /// first tail cells: everything beyond them is taken to repeat them with
    /// identity maps. On a poset the range is ignored.
    pub fn from_fn(
        space: &Space,
        field: Field,
        range: (Cell, Cell),
        dim: impl Fn(Cell) -> usize,
        gen: impl Fn(Cell, Cell) -> LinearMap,
    ) -> Result<Sheaf> {
        let (lo, hi, left, right) = match space {
            Space::Poset(p) => (0, p.size() as Cell - 1, 0, 0),
            Space::Line => (range.0 + 1, range.1 - 1, dim(range.0), dim(range.1)),
        };
        let stalks = (lo..=hi).map(&dim).collect();
        let maps = covers_touching(space, lo, hi)
            .into_iter()
            .map(|(c, d)| ((c, d), gen(c, d)))
            .collect();
        Sheaf::new(space.clone(), field, lo, hi, stalks, maps, left, right)
    }

    pub fn zero(space: &Space, field: Field) -> Sheaf {
        Sheaf::constant(space, field, 0)
    }

    /// The constant sheaf `k^d` on the whole space.
    pub fn constant(space: &Space, field: Field, d: usize) -> Sheaf {
        Sheaf::from_fn(
            space,
            field,
            (-1, 1),
            |_| d,
            |_, _| LinearMap::identity(field, d),
        )
        .unwrap()
    }

    /// `k_Z^d`: stalk `k^d` on the cells of `Z`, zero elsewhere. A generization
    /// map is the identity when both cells lie in `Z`; this is extension by
    /// zero from the open part composed with restriction to the closed part.
    pub fn constant_on(z: &LocallyClosedSet, field: Field, d: usize) -> Sheaf {
        let space = z.space().clone();
        let range = model::model_range(&space, &[z.as_cells().window()]);
        let dim = |c: Cell| if z.contains(c) { d } else { 0 };
        Sheaf::from_fn(&space, field, range, dim, |c, e| {
            if z.contains(c) && z.contains(e) {
                LinearMap::identity(field, d)
            } else {
                LinearMap::zero(field, dim(c), dim(e))
            }
        })
        .unwrap()
    }

    /// `k_U` for an open set.
    pub fn constant_on_open(u: &OpenSet, field: Field) -> Sheaf {
        Sheaf::constant_on(&LocallyClosedSet::from_open(u.clone()), field, 1)
    }

    fn validate(&self) -> Result<()> {
        for ((c, d), m) in &self.maps {
            if !self.space.leq(*c, *d) || c == d {
                return Err(Error::InvalidSheaf(format!(
                    "map {c}->{d} is not along a covering relation"
                )));
            }
            if m.field() != self.field {
                return Err(Error::FieldMismatch(
                    "generization map over another field".into(),
                ));
            }
            if m.domain_dim() != self.dim(*c) || m.codomain_dim() != self.dim(*d) {
                return Err(Error::InvalidSheaf(format!(
                    "map {}->{} has shape {}x{}, stalks have dims {} and {}",
                    self.space.cell_name(*c),
                    self.space.cell_name(*d),
                    m.codomain_dim(),
                    m.domain_dim(),
                    self.dim(*c),
                    self.dim(*d)
                )));
            }
        }
        for cover in covers_touching(&self.space, self.lo, self.hi) {
            if !self.maps.contains_key(&cover) {
                return Err(Error::InvalidSheaf(format!(
                    "missing map {}->{}",
                    cover.0, cover.1
                )));
            }
        }
        if let Space::Poset(p) = &self.space {
            // every path between two cells must compose to the same map
            let order = p.topological_order();
            for &a in &order {
                let mut reach: BTreeMap<usize, LinearMap> = BTreeMap::new();
                reach.insert(a, LinearMap::identity(self.field, self.dim(a as Cell)));
                for &b in &order {
                    if b == a || !p.leq(a, b) {
                        continue;
                    }
                    let mut found: Option<LinearMap> = None;
                    for &(c, d) in p.covers() {
                        if d != b || !p.leq(a, c) {
                            continue;
                        }
                        let via = self.maps[&(c as Cell, b as Cell)].compose(&reach[&c])?;
                        match &found {
                            None => found = Some(via),
                            Some(prev) if *prev != via => {
                                return Err(Error::InvalidSheaf(format!(
                                    "square from {a} to {b} does not commute"
                                )));
                            }
                            _ => {}
                        }
                    }
                    reach.insert(b, found.expect("b is above a"));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The explicit window `(lo, hi)`.
    pub fn window(&self) -> (Cell, Cell) {
        (self.lo, self.hi)
    }

    /// Tail dimensions `(left, right)`; always zero on posets.
    pub fn tails(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn stored_maps(&self) -> &BTreeMap<(Cell, Cell), LinearMap> {
        &self.maps
    }

    pub fn dim(&self, c: Cell) -> usize {
        if c < self.lo {
            self.left
        } else if c > self.hi {
            self.right
        } else {
            self.stalks[(c - self.lo) as usize]
        }
    }

    /// Generization map along a covering relation `c < d`.
    pub fn gen(&self, c: Cell, d: Cell) -> LinearMap {
        match self.maps.get(&(c, d)) {
            Some(m) => m.clone(),
            None => {
                debug_assert!(self.space.leq(c, d), "gen along a non-relation");
                LinearMap::identity(self.field, self.dim(c))
            }
        }
    }

    /// Generization map `F_c -> F_d` for any `c <= d`.
    pub fn map_between(&self, c: Cell, d: Cell) -> LinearMap {
        if c == d {
            return LinearMap::identity(self.field, self.dim(c));
        }
        match &self.space {
            Space::Line => self.gen(c, d),
            Space::Poset(p) => {
                let (c, d) = (c as usize, d as usize);
                let &(_, next) = p
                    .covers()
                    .iter()
                    .find(|&&(a, b)| a == c && p.leq(b, d))
                    .expect("c <= d");
                self.map_between(next as Cell, d as Cell)
                    .compose(&self.gen(c as Cell, next as Cell))
                    .expect("shapes agree")
            }
        }
    }

    /// Whether every stalk vanishes.
    pub fn is_zero(&self) -> bool {
        self.left == 0 && self.right == 0 && self.stalks.iter().all(|&d| d == 0)
    }

    pub fn has_bounded_support(&self) -> bool {
        self.left == 0 && self.right == 0
    }

    /// Cells with nonzero stalk (only defined for bounded support).
    pub fn support(&self) -> Result<Vec<Cell>> {
        if !self.has_bounded_support() {
            return Err(Error::UnboundedSupport("sheaf has a nonzero tail".into()));
        }
        Ok((self.lo..=self.hi).filter(|&c| self.dim(c) > 0).collect())
    }

    /// Semantic equality: same stalk dimensions and generization maps on
    /// every cell, independently of how the windows were chosen.
    pub fn same_as(&self, other: &Sheaf) -> bool {
        if self.space != other.space || self.field != other.field {
            return false;
        }
        if self.tails() != other.tails() {
            return false;
        }
        let (l, r) = model::model_range(&self.space, &[self.window(), other.window()]);
        let cells: Vec<Cell> = match &self.space {
            Space::Poset(p) => (0..p.size() as Cell).collect(),
            Space::Line => (l..=r).collect(),
        };
        cells.iter().all(|&c| self.dim(c) == other.dim(c))
            && covers_touching(&self.space, l, r)
                .iter()
                .all(|&(c, d)| self.gen(c, d) == other.gen(c, d))
    }

    /// Direct sum `F ⊕ G`; stalk coordinates of `F` come first.
    pub fn direct_sum(&self, other: &Sheaf) -> Result<Sheaf> {
        self.check_compatible(other)?;
        let range = model::model_range(&self.space, &[self.window(), other.window()]);
        Sheaf::from_fn(
            &self.space,
            self.field,
            range,
            |c| self.dim(c) + other.dim(c),
            |c, d| self.gen(c, d).direct_sum(&other.gen(c, d)),
        )
    }

    pub(crate) fn check_compatible(&self, other: &Sheaf) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch("sheaves on different spaces".into()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Cellwise relabeling of a line sheaf: the new stalk at `c` is the old
    /// stalk at `src(c)`. `src` must send covering pairs to covering pairs and
    /// be a translation outside `range`.
    pub(crate) fn relabel(&self, range: (Cell, Cell), src: impl Fn(Cell) -> Cell) -> Result<Sheaf> {
        Sheaf::from_fn(
            &self.space,
            self.field,
            range,
            |c| self.dim(src(c)),
            |c, d| {
                let (sc, sd) = (src(c), src(d));
                if sc == sd {
                    LinearMap::identity(self.field, self.dim(sc))
                } else if self.space.leq(sc, sd) {
                    self.gen(sc, sd)
                } else {
                    // an inserted vertex copied from the far side of its edge
                    self.gen(sd, sc)
                        .inverse()
                        .expect("relabel across a non-invertible map")
                }
            },
        )
    }

    /// Translation of a line sheaf by `s` vertices.
    pub fn shift(&self, s: i64) -> Result<Sheaf> {
        if !self.space.is_line() {
            return Err(Error::Unsupported(
                "shift is defined on the line only".into(),
            ));
        }
        self.relabel((self.lo - 1 + 2 * s, self.hi + 1 + 2 * s), |c| c - 2 * s)
    }

    /// Sections over an open set, as a subspace of the direct sum of the
    /// stalks over the returned cells.
    pub fn sections(&self, u: &OpenSet) -> Result<Sections> {
        self.sections_impl(u, false)
    }

    /// Sections over `u` whose support is bounded.
    pub fn compact_sections(&self, u: &OpenSet) -> Result<Sections> {
        self.sections_impl(u, true)
    }

    fn sections_impl(&self, u: &OpenSet, compact: bool) -> Result<Sections> {
        self.sections_in_model(u, self.window(), compact)
    }

    /// Sections over `u` computed on a model that also covers `extra`, so
    /// that sections of different sheaves share coordinates.
    pub(crate) fn sections_in_model(
        &self,
        u: &OpenSet,
        extra: (Cell, Cell),
        compact: bool,
    ) -> Result<Sections> {
        if u.space() != &self.space {
            return Err(Error::SpaceMismatch("open set on another space".into()));
        }
        let model = Model::new(&self.space, &[self.window(), u.cells().window(), extra])
            .restrict(|c| u.contains(c));
        let offsets = model.offsets(|c| self.dim(c));
        let total = *offsets.last().unwrap();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for &(c, d) in model.covers() {
            let g = self.gen(c, d);
            let (oc, od) = (offsets[model.index(c)], offsets[model.index(d)]);
            for i in 0..self.dim(d) {
                let mut row = vec![self.field.zero(); total];
                for j in 0..self.dim(c) {
                    row[oc + j] = g.get(i, j).clone();
                }
                row[od + i] = row[od + i].sub(&self.field.one());
                rows.push(row);
            }
        }
        if compact && self.space.is_line() {
            let (l, r) = model.range();
            for c in [l, r] {
                if model.contains(c) {
                    let o = offsets[model.index(c)];
                    for i in 0..self.dim(c) {
                        let mut row = vec![self.field.zero(); total];
                        row[o + i] = self.field.one();
                        rows.push(row);
                    }
                }
            }
        }
        let system = LinearMap::from_scalar_rows(self.field, total, rows)?;
        Ok(Sections {
            range: model.range(),
            cells: model.cells().to_vec(),
            offsets,
            space: system.kernel(),
        })
    }
}

/// A space of sections: a subspace of `⊕_{c in cells} F_c`.
#[derive(Clone, Debug)]
pub struct Sections {
    range: (Cell, Cell),
    cells: Vec<Cell>,
    offsets: Vec<usize>,
    space: Subspace,
}

impl Sections {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Coordinate range of the stalk at `c` inside the ambient sum.
    pub fn block(&self, c: Cell) -> Option<(usize, usize)> {
        let i = self.cells.iter().position(|&x| x == c)?;
        Some((self.offsets[i], self.offsets[i + 1]))
    }

    /// Value at cell `c` of the ambient vector `v`. Cells beyond the model
    /// lie in a tail, where a section repeats its value at the model boundary;
    /// cells outside the open set carry the zero vector of length `dim`.
    pub fn value_at(&self, v: &[Scalar], c: Cell, dim: usize) -> Vec<Scalar> {
        let (l, r) = self.range;
        let at = if c < l {
            l
        } else if c > r {
            r
        } else {
            c
        };
        match self.block(at) {
            Some((a, b)) => v[a..b].to_vec(),
            None => vec![self.space.field().zero(); dim],
        }
    }

    /// The sections vanishing at every cell outside `keep`.
    pub fn supported_in(&self, keep: impl Fn(Cell) -> bool) -> Sections {
        let field = self.space.field();
        let b = self.space.inclusion();
        let mut rows = Vec::new();
        for (i, &c) in self.cells.iter().enumerate() {
            if !keep(c) {
                for k in self.offsets[i]..self.offsets[i + 1] {
                    rows.push(b.row(k).to_vec());
                }
            }
        }
        let p = LinearMap::from_scalar_rows(field, b.domain_dim(), rows).unwrap();
        let vectors = p.kernel().basis().iter().map(|k| b.apply(k)).collect();
        Sections {
            range: self.range,
            cells: self.cells.clone(),
            offsets: self.offsets.clone(),
            space: Subspace::span(field, self.space.ambient_dim(), vectors),
        }
    }

    /// Matrix (rows = ambient coordinates, columns = basis) of the inclusion.
    pub fn inclusion(&self) -> LinearMap {
        self.space.inclusion()
    }

    /// The restriction map to sections over a smaller open, in the bases of
    /// both spaces. Both must come from the same sheaf.
    pub fn restriction_to(&self, smaller: &Sections) -> Result<LinearMap> {
        let field = self.space.field();
        let mut cols = Vec::new();
        for v in self.space.basis() {
            let mut w = vec![field.zero(); smaller.space.ambient_dim()];
            for (i, &c) in smaller.cells.iter().enumerate() {
                let (a, _) = self.block(c).ok_or_else(|| {
                    Error::InvalidOpenSet("restriction to a set that is not smaller".into())
                })?;
                for k in smaller.offsets[i]..smaller.offsets[i + 1] {
                    w[k] = v[a + k - smaller.offsets[i]].clone();
                }
            }
            cols.push(
                smaller
                    .space
                    .coordinates(&w)
                    .expect("restriction of a section is a section"),
            );
        }
        Ok(LinearMap::from_columns(field, smaller.dim(), &cols))
    }
}

impl PartialEq for Sheaf {
    fn eq(&self, other: &Sheaf) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for Sheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = (self.lo..=self.hi)
            .map(|c| format!("{}:{}", self.space.cell_name(c), self.dim(c)))
            .collect();
        if self.space.is_line() {
            write!(
                f,
                "sheaf[..{} | {} | {}..]",
                self.left,
                dims.join(" "),
                self.right
            )
        } else {
            write!(f, "sheaf[{}]", dims.join(" "))
        }
    }
}

#[cfg(test)]
mod tests;
