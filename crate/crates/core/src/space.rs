//! Combinatorial spaces: finite Alexandrov posets and the combinatorial line.
//!
//! Cells are identified by `i64`. On a finite poset they are `0..n`. On the
//! line, cell `2n` is the vertex `V(n)` and cell `2n + 1` is the open edge
//! `E(n) = (n, n + 1)`; the specialization order is `V(n) <= E(n - 1)` and
//! `V(n) <= E(n)`. Open sets are up-sets for this order.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Cell = i64;

/// Vertex `V(n)` of the line.
pub fn vertex(n: i64) -> Cell {
    2 * n
}

/// Edge `E(n) = (n, n + 1)` of the line.
pub fn edge(n: i64) -> Cell {
    2 * n + 1
}

pub fn is_vertex(c: Cell) -> bool {
    c.rem_euclid(2) == 0
}

/// Human-readable cell name on the line: `V3`, `E-1`.
pub fn line_cell_name(c: Cell) -> String {
    if is_vertex(c) {
        format!("V{}", c.div_euclid(2))
    } else {
        format!("E{}", c.div_euclid(2))
    }
}

/// A finite poset, stored with its full order relation and its covering
/// relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    size: usize,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Builds the poset generated by `relations` (pairs `a < b`); the order is
    /// their reflexive-transitive closure, which must be antisymmetric.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<FinitePoset> {
        let mut leq = vec![vec![false; size]; size];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= size || b >= size {
                return Err(Error::InvalidSpace(format!(
                    "relation {a}<{b} out of range"
                )));
            }
            leq[a][b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if leq[i][k] {
                    for j in 0..size {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..size {
            for j in 0..size {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidSpace(format!(
                        "cells {i} and {j} form a cycle"
                    )));
                }
            }
        }
        let mut covers = Vec::new();
        for a in 0..size {
            for b in 0..size {
                if a != b
                    && leq[a][b]
                    && !(0..size).any(|c| c != a && c != b && leq[a][c] && leq[c][b])
                {
                    covers.push((a, b));
                }
            }
        }
        Ok(FinitePoset { size, leq, covers })
    }

    /// The one-point space.
    pub fn point() -> FinitePoset {
        FinitePoset::new(1, &[]).unwrap()
    }

    /// A chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> FinitePoset {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::new(n, &rel).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Cells in a linear extension of the order (smaller cells first).
    pub fn topological_order(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = (0..self.size).collect();
        cells.sort_by_key(|&c| (0..self.size).filter(|&d| self.leq[d][c]).count());
        cells
    }

    /// Product poset with the product order; cell `(a, b)` has index `a * other.size + b`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let n = self.size * other.size;
        let mut rel = Vec::new();
        for &(a, a2) in &self.covers {
            for b in 0..other.size {
                rel.push((a * other.size + b, a2 * other.size + b));
            }
        }
        for a in 0..self.size {
            for &(b, b2) in &other.covers {
                rel.push((a * other.size + b, a * other.size + b2));
            }
        }
        FinitePoset::new(n, &rel).unwrap()
    }
}

/// A space: either a finite Alexandrov poset or the combinatorial line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Poset(Arc<FinitePoset>),
    Line,
}

impl Space {
    pub fn poset(p: FinitePoset) -> Space {
        Space::Poset(Arc::new(p))
    }

    pub fn point() -> Space {
        Space::poset(FinitePoset::point())
    }

    pub fn is_line(&self) -> bool {
        matches!(self, Space::Line)
    }

    pub fn as_poset(&self) -> Option<&FinitePoset> {
        match self {
            Space::Poset(p) => Some(p),
            Space::Line => None,
        }
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        match self {
            Space::Poset(p) => c >= 0 && (c as usize) < p.size(),
            Space::Line => true,
        }
    }

    /// Specialization order.
    pub fn leq(&self, a: Cell, b: Cell) -> bool {
        match self {
            Space::Poset(p) => p.leq(a as usize, b as usize),
            Space::Line => a == b || (is_vertex(a) && (b == a - 1 || b == a + 1)),
        }
    }

    /// Cells covering `c` (immediate successors).
    pub fn up_covers(&self, c: Cell) -> Vec<Cell> {
        match self {
            Space::Poset(p) => p
                .covers()
                .iter()
                .filter(|(a, _)| *a as i64 == c)
                .map(|&(_, b)| b as i64)
                .collect(),
            Space::Line if is_vertex(c) => vec![c - 1, c + 1],
            Space::Line => vec![],
        }
    }

    /// Cells covered by `c` (immediate predecessors).
    pub fn down_covers(&self, c: Cell) -> Vec<Cell> {
        match self {
            Space::Poset(p) => p
                .covers()
                .iter()
                .filter(|(_, b)| *b as i64 == c)
                .map(|&(a, _)| a as i64)
                .collect(),
            Space::Line if is_vertex(c) => vec![],
            Space::Line => vec![c - 1, c + 1],
        }
    }

    fn check_same(&self, other: &Space) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch(
                "operands live on different spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn cell_name(&self, c: Cell) -> String {
        match self {
            Space::Poset(_) => format!("c{c}"),
            Space::Line => line_cell_name(c),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Line => write!(f, "line"),
            Space::Poset(p) => {
                write!(f, "poset {} [", p.size())?;
                for (i, (a, b)) in p.covers().iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{a}<{b}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A set of cells with a finite description. On the line: the cells of a
/// window `lo..=hi` listed explicitly, plus a flag per side saying whether all
/// cells beyond the window belong to the set. The description is kept
/// canonical, so equality of sets is equality of descriptions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellSet {
    space: Space,
    lo: i64,
    hi: i64,
    cells: BTreeSet<Cell>,
    left_full: bool,
    right_full: bool,
}

impl CellSet {
    pub fn empty(space: &Space) -> CellSet {
        CellSet::from_cells(space, std::iter::empty()).unwrap()
    }

    pub fn whole(space: &Space) -> CellSet {
        match space {
            Space::Poset(p) => CellSet::from_cells(space, 0..p.size() as i64).unwrap(),
            Space::Line => CellSet::line(BTreeSet::new(), true, true),
        }
    }

    /// A finite set of cells.
    pub fn from_cells(space: &Space, cells: impl IntoIterator<Item = Cell>) -> Result<CellSet> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        if let Some(&c) = cells.iter().find(|&&c| !space.contains_cell(c)) {
            return Err(Error::InvalidOpenSet(format!(
                "cell {c} is not in the space"
            )));
        }
        Ok(match space {
            Space::Poset(p) => CellSet {
                space: space.clone(),
                lo: 0,
                hi: p.size() as i64 - 1,
                cells,
                left_full: false,
                right_full: false,
            },
            Space::Line => CellSet::line(cells, false, false),
        })
    }

    /// A subset of the line: `cells` plus full tails on the requested sides.
    /// The tails start beyond the listed cells.
    pub fn line(cells: BTreeSet<Cell>, left_full: bool, right_full: bool) -> CellSet {
        let lo = cells.iter().next().copied().unwrap_or(0);
        let hi = cells.iter().next_back().copied().unwrap_or(-1);
        CellSet::line_window(lo, hi, cells, left_full, right_full)
    }

    /// A subset of the line with an explicit window `lo..=hi`; cells outside
    /// the window belong to the set iff the corresponding tail is full.
    pub fn line_window(
        lo: i64,
        hi: i64,
        cells: BTreeSet<Cell>,
        left_full: bool,
        right_full: bool,
    ) -> CellSet {
        let cells = cells.into_iter().filter(|c| *c >= lo && *c <= hi).collect();
        let mut s = CellSet {
            space: Space::Line,
            lo,
            hi,
            cells,
            left_full,
            right_full,
        };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        if !self.space.is_line() {
            return;
        }
        while self.lo <= self.hi && self.cells.contains(&self.lo) == self.left_full {
            self.cells.remove(&self.lo);
            self.lo += 1;
        }
        while self.lo <= self.hi && self.cells.contains(&self.hi) == self.right_full {
            self.cells.remove(&self.hi);
            self.hi -= 1;
        }
        if self.lo > self.hi {
            // the split point only matters when exactly one tail is full
            if self.left_full == self.right_full {
                self.lo = 0;
            }
            self.hi = self.lo - 1;
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn contains(&self, c: Cell) -> bool {
        if c < self.lo {
            self.space.is_line() && self.left_full
        } else if c > self.hi {
            self.space.is_line() && self.right_full
        } else {
            self.cells.contains(&c)
        }
    }

    /// Window of the canonical description (`lo > hi` when empty).
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn tails(&self) -> (bool, bool) {
        (self.left_full, self.right_full)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && !self.left_full && !self.right_full
    }

    /// Finite sets are the compact ones (both tails empty).
    pub fn is_bounded(&self) -> bool {
        !self.left_full && !self.right_full
    }

    /// Explicitly listed cells (all cells, if bounded).
    pub fn listed_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    /// Members among the cells `lo..=hi`.
    pub fn cells_in(&self, lo: i64, hi: i64) -> Vec<Cell> {
        (lo..=hi).filter(|&c| self.contains(c)).collect()
    }

    pub fn cardinality(&self) -> Option<usize> {
        self.is_bounded().then(|| self.cells.len())
    }

    fn combine(&self, other: &CellSet, op: impl Fn(bool, bool) -> bool) -> Result<CellSet> {
        self.space.check_same(&other.space)?;
        match &self.space {
            Space::Poset(p) => CellSet::from_cells(
                &self.space,
                (0..p.size() as i64).filter(|&c| op(self.contains(c), other.contains(c))),
            ),
            Space::Line => {
                let lo = self.lo.min(other.lo) - 2;
                let hi = self.hi.max(other.hi) + 2;
                let cells = (lo..=hi)
                    .filter(|&c| op(self.contains(c), other.contains(c)))
                    .collect();
                Ok(CellSet::line_window(
                    lo,
                    hi,
                    cells,
                    op(self.left_full, other.left_full),
                    op(self.right_full, other.right_full),
                ))
            }
        }
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &CellSet) -> Result<CellSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> CellSet {
        CellSet::whole(&self.space).difference(self).unwrap()
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.difference(other)
            .map(|d| d.is_empty())
            .unwrap_or(false)
    }

    /// Cells to examine when deciding a property that is constant on tails.
    fn probe_range(&self) -> (i64, i64) {
        match &self.space {
            Space::Poset(p) => (0, p.size() as i64 - 1),
            Space::Line => (self.lo - 3, self.hi.max(self.lo) + 3),
        }
    }

    fn map_cells(&self, keep: impl Fn(Cell) -> bool) -> CellSet {
        let (lo, hi) = self.probe_range();
        let cells = (lo..=hi).filter(|&c| keep(c));
        match &self.space {
            Space::Poset(_) => CellSet::from_cells(&self.space, cells).unwrap(),
            Space::Line => {
                let far_l = keep(lo - 2) && keep(lo - 1);
                let far_r = keep(hi + 1) && keep(hi + 2);
                CellSet::line_window(lo, hi, cells.collect(), far_l, far_r)
            }
        }
    }

    /// Downward closure in the specialization order.
    pub fn closure(&self) -> CellSet {
        let space = self.space.clone();
        self.map_cells(|c| {
            self.contains(c) || space.up_covers_all(c).iter().any(|&d| self.contains(d))
        })
    }

    /// Largest up-set contained in the set.
    pub fn interior(&self) -> CellSet {
        let space = self.space.clone();
        self.map_cells(|c| {
            self.contains(c) && space.up_covers_all(c).iter().all(|&d| self.contains(d))
        })
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }
}

impl Space {
    /// All cells strictly above `c`.
    fn up_covers_all(&self, c: Cell) -> Vec<Cell> {
        match self {
            Space::Poset(p) => (0..p.size() as i64)
                .filter(|&d| d != c && self.leq(c, d))
                .collect(),
            Space::Line => self.up_covers(c),
        }
    }

    /// Minimal open neighbourhood of `c`.
    pub fn star(&self, c: Cell) -> OpenSet {
        let mut cells = self.up_covers_all(c);
        cells.push(c);
        OpenSet(CellSet::from_cells(self, cells).unwrap())
    }

    /// Downward closure of a single cell.
    pub fn cell_closure(&self, c: Cell) -> CellSet {
        CellSet::from_cells(self, [c]).unwrap().closure()
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        if self.left_full {
            write!(f, "..<{} ", self.lo)?;
        }
        let names: Vec<String> = self
            .cells
            .iter()
            .map(|&c| self.space.cell_name(c))
            .collect();
        write!(f, "{}", names.join(" "))?;
        if self.right_full {
            write!(f, " >{}..", self.hi)?;
        }
        write!(f, "}}")
    }
}

/// An open (upward closed) set of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenSet(CellSet);

impl OpenSet {
    pub fn new(set: CellSet) -> Result<OpenSet> {
        if !set.is_open() {
            return Err(Error::InvalidOpenSet(format!("{set} is not upward closed")));
        }
        Ok(OpenSet(set))
    }

    pub fn empty(space: &Space) -> OpenSet {
        OpenSet(CellSet::empty(space))
    }

    pub fn whole(space: &Space) -> OpenSet {
        OpenSet(CellSet::whole(space))
    }

    /// Open interval `(a, b)` of the line: edges `E(a)..E(b-1)` and the
    /// vertices strictly between.
    pub fn interval(a: i64, b: i64) -> OpenSet {
        let cells = if a < b {
            (edge(a)..=edge(b - 1)).collect()
        } else {
            BTreeSet::new()
        };
        OpenSet(CellSet::line(cells, false, false))
    }

    /// `(a, +inf)` on the line.
    pub fn right_ray(a: i64) -> OpenSet {
        OpenSet(CellSet::line_window(
            edge(a),
            edge(a) - 1,
            BTreeSet::new(),
            false,
            true,
        ))
    }

    /// `(-inf, b)` on the line.
    pub fn left_ray(b: i64) -> OpenSet {
        OpenSet(CellSet::line_window(
            vertex(b),
            vertex(b) - 1,
            BTreeSet::new(),
            true,
            false,
        ))
    }

    pub fn cells(&self) -> &CellSet {
        &self.0
    }

    pub fn space(&self) -> &Space {
        self.0.space()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.0.contains(c)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.0.is_bounded()
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        Ok(OpenSet(self.0.union(&other.0)?))
    }

    pub fn intersection(&self, other: &OpenSet) -> Result<OpenSet> {
        Ok(OpenSet(self.0.intersection(&other.0)?))
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn closure(&self) -> CellSet {
        self.0.closure()
    }

    /// Whether `self ⊂⊂ ambient`: bounded with closure inside `ambient`.
    pub fn is_relatively_compact_in(&self, ambient: &OpenSet) -> bool {
        self.is_bounded() && self.closure().is_subset(&ambient.0)
    }

    /// The union of the stars of cells `c` in `region` whose star closure lies
    /// in `self`: the largest open `V ⊆ region` with `closure(V) ⊆ self`.
    fn rc_core(&self, region: &CellSet) -> OpenSet {
        let space = self.space().clone();
        let (lo, hi) = match &space {
            Space::Poset(p) => (0, p.size() as i64 - 1),
            Space::Line => {
                assert!(region.is_bounded());
                let (l, h) = region.window();
                (l, h)
            }
        };
        let mut cells = BTreeSet::new();
        for c in lo..=hi {
            let star = space.star(c);
            if star.0.is_subset(region) && star.closure().is_subset(&self.0) {
                cells.extend(star.0.listed_cells());
            }
        }
        OpenSet(CellSet::from_cells(&space, cells).unwrap())
    }

    /// Largest member of the family `{V open : V ⊂⊂ self}` when it exists
    /// (finite posets and bounded subsets of the line).
    pub fn max_relatively_compact(&self) -> Option<OpenSet> {
        match self.space() {
            Space::Poset(_) => Some(self.clone()),
            Space::Line if self.is_bounded() => Some(self.rc_core(&self.0)),
            Space::Line => None,
        }
    }

    /// Cofinal chain of the family `{V ⊂⊂ self}`: the `n`-th member is the
    /// largest `V ⊆ (-n, n)` with `closure(V) ⊆ self`.
    pub fn rc_exhaustion(&self, n: i64) -> OpenSet {
        match self.space() {
            Space::Poset(_) => self.clone(),
            Space::Line => self.rc_core(OpenSet::interval(-n, n).cells()),
        }
    }

    /// Enumerates the filtered family `{V open : V ⊂⊂ self}`, maximal
    /// elements first. On the line with unbounded `self` the family is
    /// infinite and only members inside `(-bound, bound)` are listed.
    pub fn relatively_compact_opens(&self, bound: i64) -> Vec<OpenSet> {
        let top = match self.max_relatively_compact() {
            Some(v) => v,
            None => self.rc_exhaustion(bound),
        };
        let cells: Vec<Cell> = match self.space() {
            Space::Poset(p) => (0..p.size() as i64).filter(|&c| top.contains(c)).collect(),
            Space::Line => top.0.listed_cells().collect(),
        };
        // up-sets of the finite poset `top` are unions of stars
        let mut found: BTreeSet<Vec<Cell>> = BTreeSet::new();
        let mut frontier = vec![cells.clone()];
        while let Some(set) = frontier.pop() {
            if !found.insert(set.clone()) {
                continue;
            }
            for &c in &set {
                // every up-set of `top` is reached by removing minimal cells
                let smaller: Vec<Cell> = set.iter().copied().filter(|&d| d != c).collect();
                let s = CellSet::from_cells(self.space(), smaller.iter().copied()).unwrap();
                if s.is_open() {
                    frontier.push(smaller);
                }
            }
        }
        let mut out: Vec<OpenSet> = found
            .into_iter()
            .map(|cs| OpenSet(CellSet::from_cells(self.space(), cs).unwrap()))
            .collect();
        out.sort_by_key(|v| std::cmp::Reverse(v.0.cardinality().unwrap_or(0)));
        out
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A locally closed set `Z = U ∩ S` with `U` open and `S` closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocallyClosedSet {
    open: OpenSet,
    closed: CellSet,
}

impl LocallyClosedSet {
    pub fn new(open: OpenSet, closed: CellSet) -> Result<LocallyClosedSet> {
        if !closed.is_closed() {
            return Err(Error::InvalidOpenSet(format!("{closed} is not closed")));
        }
        open.space().check_same(closed.space())?;
        Ok(LocallyClosedSet { open, closed })
    }

    pub fn from_open(open: OpenSet) -> LocallyClosedSet {
        let closed = CellSet::whole(open.space());
        LocallyClosedSet { open, closed }
    }

    pub fn from_closed(closed: CellSet) -> Result<LocallyClosedSet> {
        let open = OpenSet::whole(closed.space());
        LocallyClosedSet::new(open, closed)
    }

    /// The closed ray `[n, +inf)` of the line.
    pub fn closed_right_ray(n: i64) -> LocallyClosedSet {
        let set = CellSet::line_window(vertex(n), vertex(n) - 1, BTreeSet::new(), false, true);
        LocallyClosedSet::from_closed(set).unwrap()
    }

    /// The closed interval `[a, b]` of the line.
    pub fn closed_interval(a: i64, b: i64) -> LocallyClosedSet {
        let cells = if a <= b {
            (vertex(a)..=vertex(b)).collect()
        } else {
            BTreeSet::new()
        };
        LocallyClosedSet::from_closed(CellSet::line(cells, false, false)).unwrap()
    }

    /// A single cell `{c}`; locally closed in any Alexandrov space.
    pub fn cell(space: &Space, c: Cell) -> LocallyClosedSet {
        LocallyClosedSet::new(space.star(c), space.cell_closure(c)).unwrap()
    }

    pub fn space(&self) -> &Space {
        self.open.space()
    }

    pub fn open_part(&self) -> &OpenSet {
        &self.open
    }

    pub fn closed_part(&self) -> &CellSet {
        &self.closed
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.open.contains(c) && self.closed.contains(c)
    }

    pub fn as_cells(&self) -> CellSet {
        self.open.0.intersection(&self.closed).unwrap()
    }
}

impl fmt::Display for LocallyClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_cells().fmt(f)
    }
}

/// Shapes of continuous (monotone) cell maps that admit finite descriptions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// Poset to poset (or poset to line), given cell by cell.
    Table(Vec<Cell>),
    /// Line to a poset, constant with value the given cell.
    LineConstant(Cell),
    /// Line to line, translation by the given number of vertices.
    LineShift(i64),
}

/// A monotone map of cells, hence continuous for the Alexandrov topologies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellMap {
    source: Space,
    target: Space,
    kind: MapKind,
}

impl CellMap {
    pub fn new(source: Space, target: Space, kind: MapKind) -> Result<CellMap> {
        match (&source, &target, &kind) {
            (Space::Poset(p), _, MapKind::Table(t)) => {
                if t.len() != p.size() {
                    return Err(Error::InvalidSpace("map table has wrong length".into()));
                }
                if let Some(c) = t.iter().find(|&&c| !target.contains_cell(c)) {
                    return Err(Error::InvalidSpace(format!("image cell {c} not in target")));
                }
                for a in 0..p.size() {
                    for b in 0..p.size() {
                        if p.leq(a, b) && !target.leq(t[a], t[b]) {
                            return Err(Error::InvalidSpace(format!(
                                "map is not monotone on {a}<={b}"
                            )));
                        }
                    }
                }
            }
            (Space::Line, Space::Poset(_), MapKind::LineConstant(c))
                if target.contains_cell(*c) => {}
            (Space::Line, Space::Line, MapKind::LineShift(_)) => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "map shape {kind:?} from {source} to {target}"
                )))
            }
        }
        Ok(CellMap {
            source,
            target,
            kind,
        })
    }

    pub fn identity(space: &Space) -> CellMap {
        match space {
            Space::Poset(p) => CellMap::new(
                space.clone(),
                space.clone(),
                MapKind::Table((0..p.size() as i64).collect()),
            )
            .unwrap(),
            Space::Line => CellMap::new(Space::Line, Space::Line, MapKind::LineShift(0)).unwrap(),
        }
    }

    /// Constant map to a cell of a poset.
    pub fn constant(source: &Space, target: &Space, c: Cell) -> Result<CellMap> {
        match source {
            Space::Poset(p) => CellMap::new(
                source.clone(),
                target.clone(),
                MapKind::Table(vec![c; p.size()]),
            ),
            Space::Line => CellMap::new(Space::Line, target.clone(), MapKind::LineConstant(c)),
        }
    }

    /// Inclusion of the point at cell `c` of `target`.
    pub fn point_inclusion(target: &Space, c: Cell) -> Result<CellMap> {
        CellMap::new(Space::point(), target.clone(), MapKind::Table(vec![c]))
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && match &self.kind {
                MapKind::Table(t) => t.iter().enumerate().all(|(i, &c)| i as i64 == c),
                MapKind::LineShift(s) => *s == 0,
                MapKind::LineConstant(_) => false,
            }
    }

    pub fn apply(&self, c: Cell) -> Cell {
        match &self.kind {
            MapKind::Table(t) => t[c as usize],
            MapKind::LineConstant(t) => *t,
            MapKind::LineShift(s) => c + 2 * s,
        }
    }

    /// Cellwise preimage of a cell set.
    pub fn preimage_cells(&self, set: &CellSet) -> Result<CellSet> {
        self.target.check_same(set.space())?;
        Ok(match (&self.source, &self.kind) {
            (Space::Poset(p), _) => CellSet::from_cells(
                &self.source,
                (0..p.size() as i64).filter(|&c| set.contains(self.apply(c))),
            )?,
            (Space::Line, MapKind::LineConstant(t)) => {
                if set.contains(*t) {
                    CellSet::whole(&Space::Line)
                } else {
                    CellSet::empty(&Space::Line)
                }
            }
            (Space::Line, MapKind::LineShift(s)) => {
                let (lo, hi) = set.window();
                let (l, r) = set.tails();
                let cells = set.listed_cells().map(|c| c - 2 * s).collect();
                CellSet::line_window(lo - 2 * s, hi - 2 * s, cells, l, r)
            }
            _ => unreachable!("validated at construction"),
        })
    }

    pub fn preimage(&self, u: &OpenSet) -> Result<OpenSet> {
        Ok(OpenSet(self.preimage_cells(u.cells())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cell() -> Space {
        // 0 < 1, 0 < 2: a closed point with two open branches
        Space::poset(FinitePoset::new(3, &[(0, 1), (0, 2)]).unwrap())
    }

    #[test]
    fn union_with_empty() {
        let u = OpenSet::interval(0, 3);
        assert_eq!(u.union(&OpenSet::empty(&Space::Line)).unwrap(), u);
    }

    #[test]
    fn interval_intersection_is_single_edge() {
        let a = OpenSet::interval(0, 3);
        let b = OpenSet::interval(2, 5);
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.cells().listed_cells().collect::<Vec<_>>(), vec![edge(2)]);
        assert_eq!(i, OpenSet::interval(2, 3));
    }

    #[test]
    fn full_tails_union() {
        let a = OpenSet::right_ray(0);
        let b = OpenSet::left_ray(5);
        let u = a.union(&b).unwrap();
        assert_eq!(u, OpenSet::whole(&Space::Line));
        assert_eq!(a.union(&OpenSet::right_ray(3)).unwrap(), a);
    }

    #[test]
    fn closure_and_interior_on_line() {
        let e1 = CellSet::from_cells(&Space::Line, [edge(1)]).unwrap();
        let cl = e1.closure();
        assert_eq!(
            cl.listed_cells().collect::<Vec<_>>(),
            vec![vertex(1), edge(1), vertex(2)]
        );
        assert!(cl.closure() == cl);
        let v1 = CellSet::from_cells(&Space::Line, [vertex(1)]).unwrap();
        assert!(v1.interior().is_empty());
        assert!(v1.is_closed());
        assert!(e1.is_open());
    }

    #[test]
    fn rays_are_open_and_closed_rays_closed() {
        assert!(OpenSet::new(OpenSet::right_ray(2).cells().clone()).is_ok());
        assert!(LocallyClosedSet::closed_right_ray(2)
            .closed_part()
            .is_closed());
        assert!(LocallyClosedSet::closed_right_ray(2).contains(vertex(2)));
        assert!(!LocallyClosedSet::closed_right_ray(2).contains(edge(1)));
        assert!(OpenSet::new(CellSet::from_cells(&Space::Line, [vertex(0)]).unwrap()).is_err());
    }

    #[test]
    fn relatively_compact_family_on_poset() {
        let x = three_cell();
        let u = OpenSet::whole(&x);
        let fam = u.relatively_compact_opens(0);
        assert_eq!(fam[0], u);
        // up-sets of 0<1,0<2: {}, {1}, {2}, {1,2}, {0,1,2}
        assert_eq!(fam.len(), 5);
    }

    #[test]
    fn relatively_compact_max_on_line() {
        let u = OpenSet::interval(0, 3);
        let v = u.max_relatively_compact().unwrap();
        assert_eq!(v.cells().listed_cells().collect::<Vec<_>>(), vec![edge(1)]);
        assert!(v.is_relatively_compact_in(&u));
        assert!(OpenSet::empty(&Space::Line)
            .relatively_compact_opens(4)
            .iter()
            .all(|v| v.is_empty()));
    }

    #[test]
    fn relatively_compact_family_is_filtered() {
        let u = OpenSet::interval(-1, 4);
        let fam = u.relatively_compact_opens(0);
        for a in &fam {
            for b in &fam {
                let ub = a.union(b).unwrap();
                assert!(fam.contains(&ub));
            }
        }
    }

    #[test]
    fn preimage_examples() {
        let id = CellMap::identity(&Space::Line);
        let u = OpenSet::interval(0, 1);
        assert_eq!(id.preimage(&u).unwrap(), u);
        let pt = Space::point();
        let c = CellMap::constant(&Space::Line, &pt, 0).unwrap();
        assert_eq!(
            c.preimage(&OpenSet::whole(&pt)).unwrap(),
            OpenSet::whole(&Space::Line)
        );
        let shift = CellMap::new(Space::Line, Space::Line, MapKind::LineShift(1)).unwrap();
        assert_eq!(shift.preimage(&u).unwrap(), OpenSet::interval(-1, 0));
    }

    #[test]
    fn non_monotone_map_rejected() {
        let x = three_cell();
        assert!(CellMap::new(x.clone(), x, MapKind::Table(vec![1, 0, 0])).is_err());
    }

    #[test]
    fn preimage_commutes_with_union_and_intersection() {
        let x = Space::poset(FinitePoset::chain(3));
        let f = CellMap::new(three_cell(), x.clone(), MapKind::Table(vec![0, 1, 2])).unwrap();
        let opens: Vec<OpenSet> = OpenSet::whole(&x).relatively_compact_opens(0);
        for a in &opens {
            for b in &opens {
                let u = f.preimage(&a.union(b).unwrap()).unwrap();
                assert_eq!(
                    u,
                    f.preimage(a)
                        .unwrap()
                        .union(&f.preimage(b).unwrap())
                        .unwrap()
                );
                let i = f.preimage(&a.intersection(b).unwrap()).unwrap();
                assert_eq!(
                    i,
                    f.preimage(a)
                        .unwrap()
                        .intersection(&f.preimage(b).unwrap())
                        .unwrap()
                );
            }
        }
    }
}
