//! Morphisms of sheaves and global Hom spaces.

use std::fmt;

use super::model::{model_range, Model};
use super::Sheaf;
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Scalar, Subspace};
use crate::space::{Cell, Space};

/// A morphism of sheaves: a linear map between stalks at every cell,
/// commuting with generization. On the line the components are explicit on a
/// window and constant on each tail.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    source: Sheaf,
    target: Sheaf,
    lo: Cell,
    hi: Cell,
    comps: Vec<LinearMap>,
    left: LinearMap,
    right: LinearMap,
}

impl SheafMorphism {
    /// Builds a morphism by evaluating `comp` on a model range covering both
    /// sheaves; on the line the outermost cells give the tail components.
    pub fn from_fn(
        source: &Sheaf,
        target: &Sheaf,
        comp: impl Fn(Cell) -> LinearMap,
    ) -> Result<SheafMorphism> {
        source.check_compatible(target)?;
        let space = source.space();
        let (l, r) = model_range(space, &[source.window(), target.window()]);
        let field = source.field();
        let (lo, hi, left, right) = match space {
            Space::Poset(_) => (
                l,
                r,
                LinearMap::zero(field, 0, 0),
                LinearMap::zero(field, 0, 0),
            ),
            Space::Line => (l + 1, r - 1, comp(l), comp(r)),
        };
        let comps = (lo..=hi).map(&comp).collect();
        let m = SheafMorphism {
            source: source.clone(),
            target: target.clone(),
            lo,
            hi,
            comps,
            left,
            right,
        };
        m.validate()?;
        Ok(m)
    }

    /// A morphism from explicit components on a window and tail components.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: &Sheaf,
        target: &Sheaf,
        lo: Cell,
        hi: Cell,
        comps: Vec<LinearMap>,
        left: LinearMap,
        right: LinearMap,
    ) -> Result<SheafMorphism> {
        source.check_compatible(target)?;
        if comps.len() as i64 != hi - lo + 1 {
            return Err(Error::NotAMorphism(
                "component list does not match the window".into(),
            ));
        }
        if let Space::Poset(p) = source.space() {
            if lo != 0 || hi != p.size() as Cell - 1 {
                return Err(Error::NotAMorphism(
                    "poset morphisms list every cell".into(),
                ));
            }
        }
        let m = SheafMorphism {
            source: source.clone(),
            target: target.clone(),
            lo,
            hi,
            comps,
            left,
            right,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let space = self.source.space();
        let model = Model::new(
            space,
            &[self.window(), self.source.window(), self.target.window()],
        );
        for &c in model.cells() {
            let m = self.component(c);
            if m.domain_dim() != self.source.dim(c) || m.codomain_dim() != self.target.dim(c) {
                return Err(Error::NotAMorphism(format!(
                    "component at {} has the wrong shape",
                    space.cell_name(c)
                )));
            }
        }
        for &(c, d) in model.covers() {
            let a = self.target.gen(c, d).compose(&self.component(c))?;
            let b = self.component(d).compose(&self.source.gen(c, d))?;
            if a != b {
                return Err(Error::NotAMorphism(format!(
                    "does not commute with generization {} -> {}",
                    space.cell_name(c),
                    space.cell_name(d)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(f: &Sheaf) -> SheafMorphism {
        SheafMorphism::from_fn(f, f, |c| LinearMap::identity(f.field(), f.dim(c))).unwrap()
    }

    pub fn zero(source: &Sheaf, target: &Sheaf) -> Result<SheafMorphism> {
        SheafMorphism::from_fn(source, target, |c| {
            LinearMap::zero(source.field(), source.dim(c), target.dim(c))
        })
    }

    pub fn source(&self) -> &Sheaf {
        &self.source
    }

    pub fn target(&self) -> &Sheaf {
        &self.target
    }

    pub fn window(&self) -> (Cell, Cell) {
        (self.lo, self.hi)
    }

    pub fn tail_components(&self) -> (&LinearMap, &LinearMap) {
        (&self.left, &self.right)
    }

    pub fn component(&self, c: Cell) -> LinearMap {
        if c < self.lo {
            self.left.clone()
        } else if c > self.hi {
            self.right.clone()
        } else {
            self.comps[(c - self.lo) as usize].clone()
        }
    }

    fn all_windows(&self, other: &SheafMorphism) -> Vec<(Cell, Cell)> {
        vec![
            self.window(),
            self.source.window(),
            self.target.window(),
            other.window(),
            other.source.window(),
            other.target.window(),
        ]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SheafMorphism) -> Result<SheafMorphism> {
        if !inner.target.same_as(&self.source) {
            return Err(Error::NotAMorphism(
                "composition of non-composable morphisms".into(),
            ));
        }
        let range = model_range(self.source.space(), &self.all_windows(inner));
        SheafMorphism::from_fn_range(&inner.source, &self.target, range, |c| {
            self.component(c).compose(&inner.component(c)).unwrap()
        })
    }

    /// Like [`SheafMorphism::from_fn`] with an explicit model range.
    pub(crate) fn from_fn_range(
        source: &Sheaf,
        target: &Sheaf,
        range: (Cell, Cell),
        comp: impl Fn(Cell) -> LinearMap,
    ) -> Result<SheafMorphism> {
        let space = source.space();
        let (l, r) = {
            let w = model_range(space, &[source.window(), target.window()]);
            (w.0.min(range.0), w.1.max(range.1))
        };
        let field = source.field();
        let (lo, hi, left, right) = match space {
            Space::Poset(_) => (
                l,
                r,
                LinearMap::zero(field, 0, 0),
                LinearMap::zero(field, 0, 0),
            ),
            Space::Line => (l + 1, r - 1, comp(l), comp(r)),
        };
        let comps = (lo..=hi).map(&comp).collect();
        SheafMorphism::new(source, target, lo, hi, comps, left, right)
    }

    fn combine(
        &self,
        other: &SheafMorphism,
        op: impl Fn(&LinearMap, &LinearMap) -> LinearMap,
    ) -> Result<SheafMorphism> {
        if !self.source.same_as(&other.source) || !self.target.same_as(&other.target) {
            return Err(Error::NotAMorphism(
                "morphisms between different sheaves".into(),
            ));
        }
        let range = model_range(self.source.space(), &self.all_windows(other));
        SheafMorphism::from_fn_range(&self.source, &self.target, range, |c| {
            op(&self.component(c), &other.component(c))
        })
    }

    pub fn add(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        self.combine(other, |a, b| a.add(b).unwrap())
    }

    pub fn sub(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        self.combine(other, |a, b| a.sub(b).unwrap())
    }

    pub fn scale(&self, s: &Scalar) -> SheafMorphism {
        let range = model_range(self.source.space(), &[self.window()]);
        SheafMorphism::from_fn_range(&self.source, &self.target, range, |c| {
            self.component(c).scale(s)
        })
        .unwrap()
    }

    /// Cells on which the morphism could be nonzero are all inside a model
    /// range, so vanishing is decided there.
    pub fn is_zero(&self) -> bool {
        let model = Model::new(
            self.source.space(),
            &[self.window(), self.source.window(), self.target.window()],
        );
        model.cells().iter().all(|&c| self.component(c).is_zero())
    }

    /// Equality of components at every cell.
    pub fn same_as(&self, other: &SheafMorphism) -> bool {
        self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
            && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Whether every component is invertible.
    pub fn is_iso(&self) -> bool {
        let model = Model::new(
            self.source.space(),
            &[self.window(), self.source.window(), self.target.window()],
        );
        model
            .cells()
            .iter()
            .all(|&c| self.component(c).is_invertible())
    }

    pub fn is_mono(&self) -> bool {
        let model = Model::new(
            self.source.space(),
            &[self.window(), self.source.window(), self.target.window()],
        );
        model
            .cells()
            .iter()
            .all(|&c| self.component(c).is_injective())
    }

    pub fn is_epi(&self) -> bool {
        let model = Model::new(
            self.source.space(),
            &[self.window(), self.source.window(), self.target.window()],
        );
        model
            .cells()
            .iter()
            .all(|&c| self.component(c).is_surjective())
    }

    /// Cellwise inverse of an isomorphism.
    pub fn inverse(&self) -> Result<SheafMorphism> {
        if !self.is_iso() {
            return Err(Error::NotAMorphism("not an isomorphism".into()));
        }
        let range = model_range(self.source.space(), &[self.window()]);
        SheafMorphism::from_fn_range(&self.target, &self.source, range, |c| {
            self.component(c).inverse().unwrap()
        })
    }

    /// `f ⊕ g : F ⊕ F' -> G ⊕ G'`.
    pub fn direct_sum(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        let s = self.source.direct_sum(&other.source)?;
        let t = self.target.direct_sum(&other.target)?;
        let range = model_range(s.space(), &self.all_windows(other));
        SheafMorphism::from_fn_range(&s, &t, range, |c| {
            self.component(c).direct_sum(&other.component(c))
        })
    }

    /// Flattened components over the cells of `model`.
    pub(crate) fn flatten(&self, model: &Model) -> Vec<Scalar> {
        let mut out = Vec::new();
        for &c in model.cells() {
            out.extend(self.component(c).entries().iter().cloned());
        }
        out
    }
}

impl fmt::Display for SheafMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "morphism {} -> {}", self.source, self.target)
    }
}

/// The space `Hom(F, G)` of sheaf morphisms, with an explicit basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Sheaf,
    target: Sheaf,
    model: Model,
    space: Subspace,
    basis: Vec<SheafMorphism>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SheafMorphism] {
        &self.basis
    }

    pub fn source(&self) -> &Sheaf {
        &self.source
    }

    pub fn target(&self) -> &Sheaf {
        &self.target
    }

    /// Coordinates of a morphism `F -> G` in the basis.
    pub fn coordinates(&self, m: &SheafMorphism) -> Result<Vec<Scalar>> {
        if !m.source().same_as(&self.source) || !m.target().same_as(&self.target) {
            return Err(Error::NotAMorphism(
                "morphism outside this Hom space".into(),
            ));
        }
        let flat = m.flatten(&self.model);
        let coords = self
            .space
            .coordinates(&flat)
            .expect("a morphism lies in Hom");
        // the subspace basis and the morphism basis are in the same order
        Ok(coords)
    }

    /// The morphism with the given coordinates.
    pub fn element(&self, coords: &[Scalar]) -> SheafMorphism {
        let mut acc = SheafMorphism::zero(&self.source, &self.target).unwrap();
        for (b, s) in self.basis.iter().zip(coords) {
            acc = acc.add(&b.scale(s)).unwrap();
        }
        acc
    }
}

impl Sheaf {
    /// Global `Hom(F, G)`: the kernel of the linear system expressing
    /// commutation with every generization map.
    pub fn hom_space(&self, target: &Sheaf) -> Result<HomSpace> {
        self.check_compatible(target)?;
        let field = self.field();
        let model = Model::new(self.space(), &[self.window(), target.window()]);
        let size = |c: Cell| self.dim(c) * target.dim(c);
        let offsets = model.offsets(size);
        let total = *offsets.last().unwrap();
        let mut rows = Vec::new();
        for &(c, d) in model.covers() {
            let (fg, gg) = (self.gen(c, d), target.gen(c, d));
            let (oc, od) = (offsets[model.index(c)], offsets[model.index(d)]);
            let (fc, fd, gc, gd) = (self.dim(c), self.dim(d), target.dim(c), target.dim(d));
            // (G_cd φ_c - φ_d F_cd)[i][j] = 0 for i < gd, j < fc
            for i in 0..gd {
                for j in 0..fc {
                    let mut row = vec![field.zero(); total];
                    for k in 0..gc {
                        let v = gg.get(i, k);
                        if !v.is_zero() {
                            row[oc + k * fc + j] = row[oc + k * fc + j].add(v);
                        }
                    }
                    for k in 0..fd {
                        let v = fg.get(k, j);
                        if !v.is_zero() {
                            row[od + i * fd + k] = row[od + i * fd + k].sub(v);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let system = LinearMap::from_scalar_rows(field, total, rows)?;
        let space = system.kernel();
        let (l, r) = model.range();
        let basis = space
            .basis()
            .iter()
            .map(|v| {
                let comp = |c: Cell| {
                    let i = model.index(c.clamp(l, r));
                    let (fc, gc) = (self.dim(c), target.dim(c));
                    let entries: Vec<Vec<Scalar>> = (0..gc)
                        .map(|a| {
                            (0..fc)
                                .map(|b| v[offsets[i] + a * fc + b].clone())
                                .collect()
                        })
                        .collect();
                    LinearMap::from_scalar_rows(field, fc, entries).unwrap()
                };
                SheafMorphism::from_fn_range(self, target, (l, r), comp)
                    .expect("kernel vectors are morphisms")
            })
            .collect();
        Ok(HomSpace {
            source: self.clone(),
            target: target.clone(),
            model,
            space,
            basis,
        })
    }
}
