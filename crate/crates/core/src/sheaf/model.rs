//! Finite cell models used to turn sheaf computations into linear systems.

use std::collections::HashMap;

use crate::space::{is_vertex, Cell, Space};

/// Margin kept between every described window and the model boundary.
const MARGIN: i64 = 3;

/// A range `(l, r)` of line cells covering `windows` with a margin; `l` and
/// `r` are edges, so the cells strictly between them form an open interval
/// and the boundary cells lie in every tail. On a poset: all cells.
pub(crate) fn model_range(space: &Space, windows: &[(Cell, Cell)]) -> (Cell, Cell) {
    match space {
        Space::Poset(p) => (0, p.size() as Cell - 1),
        Space::Line => {
            let lo = windows.iter().map(|w| w.0.min(w.1)).min().unwrap_or(0);
            let hi = windows.iter().map(|w| w.1.max(w.0)).max().unwrap_or(0);
            let mut l = lo - MARGIN;
            let mut r = hi + MARGIN;
            if is_vertex(l) {
                l -= 1;
            }
            if is_vertex(r) {
                r += 1;
            }
            (l, r)
        }
    }
}

/// A finite set of cells with the covering relations among them.
#[derive(Clone, Debug)]
pub(crate) struct Model {
    range: (Cell, Cell),
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    covers: Vec<(Cell, Cell)>,
}

impl Model {
    pub(crate) fn new(space: &Space, windows: &[(Cell, Cell)]) -> Model {
        let range = model_range(space, windows);
        let cells: Vec<Cell> = (range.0..=range.1).collect();
        let covers = match space {
            Space::Poset(p) => p
                .covers()
                .iter()
                .map(|&(a, b)| (a as Cell, b as Cell))
                .collect(),
            Space::Line => cells
                .iter()
                .filter(|&&v| is_vertex(v))
                .flat_map(|&v| [(v, v - 1), (v, v + 1)])
                .collect(),
        };
        Model::from_parts(range, cells, covers)
    }

    fn from_parts(range: (Cell, Cell), cells: Vec<Cell>, covers: Vec<(Cell, Cell)>) -> Model {
        let index = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Model {
            range,
            cells,
            index,
            covers,
        }
    }

    /// Sub-model on the cells satisfying `keep`.
    pub(crate) fn restrict(&self, keep: impl Fn(Cell) -> bool) -> Model {
        let cells: Vec<Cell> = self.cells.iter().copied().filter(|&c| keep(c)).collect();
        let covers = self
            .covers
            .iter()
            .copied()
            .filter(|&(a, b)| keep(a) && keep(b))
            .collect();
        Model::from_parts(self.range, cells, covers)
    }

    pub(crate) fn range(&self) -> (Cell, Cell) {
        self.range
    }

    pub(crate) fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub(crate) fn covers(&self) -> &[(Cell, Cell)] {
        &self.covers
    }

    pub(crate) fn contains(&self, c: Cell) -> bool {
        self.index.contains_key(&c)
    }

    pub(crate) fn index(&self, c: Cell) -> usize {
        self.index[&c]
    }

    /// Prefix sums of `size` over the cells (length `cells + 1`).
    pub(crate) fn offsets(&self, size: impl Fn(Cell) -> usize) -> Vec<usize> {
        let mut out = vec![0];
        for &c in &self.cells {
            out.push(out.last().unwrap() + size(c));
        }
        out
    }
}
