//! Cellwise constructions: kernels, cokernels, images, tensor products,
//! internal hom, restrictions and relabelings of the line.

use super::model::model_range;
use super::{HomSpace, Sheaf, SheafMorphism};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Scalar, Subspace};
use crate::space::{Cell, CellSet, LocallyClosedSet, OpenSet, Space};

/// Cell relabeling that inserts `l` vertex periods left of vertex `a` and
/// `r` periods right of vertex `b`, copying the cells next to the cut.
pub fn stretch_source(a: i64, b: i64, l: i64, r: i64) -> impl Fn(Cell) -> Cell + Copy {
    let (ca, cb) = (2 * a, 2 * b);
    move |c: Cell| {
        if c < ca - 2 * l {
            c + 2 * l
        } else if c < ca {
            if c.rem_euclid(2) == 0 {
                ca
            } else {
                ca + 1
            }
        } else if c <= cb {
            c
        } else if c <= cb + 2 * r {
            if c.rem_euclid(2) == 0 {
                cb
            } else {
                cb - 1
            }
        } else {
            c - 2 * r
        }
    }
}

/// Range of the new window after stretching a window `(lo, hi)`.
fn stretch_range(window: (Cell, Cell), a: i64, b: i64, l: i64, r: i64) -> (Cell, Cell) {
    let mut lo = window.0.min(2 * a) - 2 * l - 3;
    let mut hi = window.1.max(2 * b) + 2 * r + 3;
    if lo.rem_euclid(2) == 0 {
        lo -= 1;
    }
    if hi.rem_euclid(2) == 0 {
        hi += 1;
    }
    (lo, hi)
}

impl Sheaf {
    /// Stretches a line sheaf at the vertices `a <= b`; see [`stretch_source`].
    pub fn stretch(&self, a: i64, b: i64, l: i64, r: i64) -> Result<Sheaf> {
        if !self.space().is_line() || a > b || l < 0 || r < 0 {
            return Err(Error::Unsupported(
                "stretch needs a line sheaf and a <= b, l, r >= 0".into(),
            ));
        }
        self.relabel(
            stretch_range(self.window(), a, b, l, r),
            stretch_source(a, b, l, r),
        )
    }

    /// `F_U`: extension by zero of the restriction to an open set.
    pub fn restrict_open(&self, u: &OpenSet) -> Result<Sheaf> {
        self.restrict_locally_closed(&LocallyClosedSet::from_open(u.clone()))
    }

    /// `F_S` for a closed set.
    pub fn restrict_closed(&self, s: &CellSet) -> Result<Sheaf> {
        self.restrict_locally_closed(&LocallyClosedSet::from_closed(s.clone())?)
    }

    /// `F_Z = (F_S)_U` for `Z = U ∩ S`.
    pub fn restrict_locally_closed(&self, z: &LocallyClosedSet) -> Result<Sheaf> {
        if z.space() != self.space() {
            return Err(Error::SpaceMismatch("set on another space".into()));
        }
        let range = model_range(self.space(), &[self.window(), z.as_cells().window()]);
        let dim = |c: Cell| if z.contains(c) { self.dim(c) } else { 0 };
        Sheaf::from_fn(self.space(), self.field(), range, dim, |c, d| {
            if z.contains(c) && z.contains(d) {
                self.gen(c, d)
            } else {
                LinearMap::zero(self.field(), dim(c), dim(d))
            }
        })
    }

    /// The canonical monomorphism `F_U -> F`.
    pub fn open_inclusion(&self, u: &OpenSet) -> Result<SheafMorphism> {
        let fu = self.restrict_open(u)?;
        SheafMorphism::from_fn_range(
            &fu,
            self,
            model_range(self.space(), &[u.cells().window()]),
            |c| {
                if u.contains(c) {
                    LinearMap::identity(self.field(), self.dim(c))
                } else {
                    LinearMap::zero(self.field(), 0, self.dim(c))
                }
            },
        )
    }

    /// The canonical epimorphism `F -> F_S` for a closed set.
    pub fn closed_projection(&self, s: &CellSet) -> Result<SheafMorphism> {
        let fs = self.restrict_closed(s)?;
        SheafMorphism::from_fn_range(self, &fs, model_range(self.space(), &[s.window()]), |c| {
            if s.contains(c) {
                LinearMap::identity(self.field(), self.dim(c))
            } else {
                LinearMap::zero(self.field(), self.dim(c), 0)
            }
        })
    }

    /// Stalkwise tensor product with Kronecker generization maps.
    pub fn tensor(&self, other: &Sheaf) -> Result<Sheaf> {
        self.check_compatible(other)?;
        let range = model_range(self.space(), &[self.window(), other.window()]);
        Sheaf::from_fn(
            self.space(),
            self.field(),
            range,
            |c| self.dim(c) * other.dim(c),
            |c, d| self.gen(c, d).tensor(&other.gen(c, d)),
        )
    }

    /// Morphisms between the restrictions to the cells `cells` (an open set
    /// of a finite model), as a subspace of the flattened components.
    fn local_hom(&self, other: &Sheaf, cells: &[Cell]) -> (Vec<usize>, Subspace) {
        let field = self.field();
        let mut offsets = vec![0];
        for &c in cells {
            offsets.push(offsets.last().unwrap() + self.dim(c) * other.dim(c));
        }
        let total = *offsets.last().unwrap();
        let pos = |c: Cell| cells.iter().position(|&x| x == c);
        let mut rows = Vec::new();
        for (ic, &c) in cells.iter().enumerate() {
            for d in self.space().up_covers(c) {
                let Some(id) = pos(d) else { continue };
                let (fg, gg) = (self.gen(c, d), other.gen(c, d));
                let (fc, fd, gc, gd) = (self.dim(c), self.dim(d), other.dim(c), other.dim(d));
                for i in 0..gd {
                    for j in 0..fc {
                        let mut row = vec![field.zero(); total];
                        for k in 0..gc {
                            let at = offsets[ic] + k * fc + j;
                            row[at] = row[at].add(gg.get(i, k));
                        }
                        for k in 0..fd {
                            let at = offsets[id] + i * fd + k;
                            row[at] = row[at].sub(fg.get(k, j));
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let system = LinearMap::from_scalar_rows(field, total, rows).unwrap();
        (offsets, system.kernel())
    }

    fn star_cells(&self, c: Cell) -> Vec<Cell> {
        let star = self.space().star(c);
        match self.space() {
            Space::Poset(p) => (0..p.size() as Cell)
                .filter(|&d| star.contains(d))
                .collect(),
            Space::Line => (c - 1..=c + 1).filter(|&d| star.contains(d)).collect(),
        }
    }

    /// The internal hom sheaf: the stalk at `c` is `Hom(F|star(c), G|star(c))`
    /// and generization is restriction to the smaller star.
    pub fn hom_sheaf(&self, other: &Sheaf) -> Result<Sheaf> {
        self.check_compatible(other)?;
        let field = self.field();
        let range = model_range(self.space(), &[self.window(), other.window()]);
        let local = |c: Cell| {
            let cells = self.star_cells(c);
            let (offsets, space) = self.local_hom(other, &cells);
            (cells, offsets, space)
        };
        Sheaf::from_fn(
            self.space(),
            field,
            range,
            |c| local(c).2.dim(),
            |c, d| {
                let (cc, oc, sc) = local(c);
                let (cd, od, sd) = local(d);
                let cols: Vec<Vec<Scalar>> = sc
                    .basis()
                    .iter()
                    .map(|v| {
                        let mut w = Vec::new();
                        for (i, x) in cd.iter().enumerate() {
                            let j = cc
                                .iter()
                                .position(|y| y == x)
                                .expect("star(d) is inside star(c)");
                            debug_assert_eq!(od[i + 1] - od[i], oc[j + 1] - oc[j]);
                            w.extend(v[oc[j]..oc[j + 1]].iter().cloned());
                        }
                        sd.coordinates(&w).expect("restriction of a local morphism")
                    })
                    .collect();
                LinearMap::from_columns(field, sd.dim(), &cols)
            },
        )
    }

    /// Global sections `Γ(X; F)`.
    pub fn global_sections(&self) -> Result<super::Sections> {
        self.sections(&OpenSet::whole(self.space()))
    }
}

/// Kernel of a morphism with its inclusion.
pub struct Kernel {
    pub object: Sheaf,
    pub inclusion: SheafMorphism,
}

/// Cokernel of a morphism with its projection.
pub struct Cokernel {
    pub object: Sheaf,
    pub projection: SheafMorphism,
}

/// Image factorization `F -> Im -> G`.
pub struct Image {
    pub object: Sheaf,
    pub coimage_map: SheafMorphism,
    pub inclusion: SheafMorphism,
}

fn basis_matrix(s: &Subspace) -> LinearMap {
    s.inclusion()
}

impl SheafMorphism {
    fn model_range(&self) -> (Cell, Cell) {
        model_range(
            self.source().space(),
            &[
                self.window(),
                self.source().window(),
                self.target().window(),
            ],
        )
    }

    /// Cellwise kernel with induced generization maps.
    pub fn kernel(&self) -> Result<Kernel> {
        let f = self.source();
        let range = self.model_range();
        let ker = |c: Cell| basis_matrix(&self.component(c).kernel());
        let object = Sheaf::from_fn(
            f.space(),
            f.field(),
            range,
            |c| ker(c).domain_dim(),
            |c, d| {
                let moved = f.gen(c, d).compose(&ker(c)).unwrap();
                ker(d)
                    .solve_matrix(&moved)
                    .expect("generization preserves kernels")
            },
        )?;
        let inclusion = SheafMorphism::from_fn_range(&object, f, range, ker)?;
        Ok(Kernel { object, inclusion })
    }

    /// Cellwise image with the factorization of the morphism through it.
    pub fn image(&self) -> Result<Image> {
        let g = self.target();
        let range = self.model_range();
        let img = |c: Cell| basis_matrix(&self.component(c).image());
        let object = Sheaf::from_fn(
            g.space(),
            g.field(),
            range,
            |c| img(c).domain_dim(),
            |c, d| {
                let moved = g.gen(c, d).compose(&img(c)).unwrap();
                img(d)
                    .solve_matrix(&moved)
                    .expect("generization preserves images")
            },
        )?;
        let inclusion = SheafMorphism::from_fn_range(&object, g, range, img)?;
        let coimage_map = SheafMorphism::from_fn_range(self.source(), &object, range, |c| {
            img(c)
                .solve_matrix(&self.component(c))
                .expect("factors through the image")
        })?;
        Ok(Image {
            object,
            coimage_map,
            inclusion,
        })
    }

    /// Cellwise cokernel with induced generization maps.
    pub fn cokernel(&self) -> Result<Cokernel> {
        let g = self.target();
        let field = g.field();
        let range = self.model_range();
        let proj = |c: Cell| self.component(c).cokernel().0;
        let object = Sheaf::from_fn(
            g.space(),
            field,
            range,
            |c| proj(c).codomain_dim(),
            |c, d| {
                let pc = proj(c);
                let section = pc
                    .solve_matrix(&LinearMap::identity(field, pc.codomain_dim()))
                    .expect("quotient maps are onto");
                proj(d)
                    .compose(&g.gen(c, d))
                    .unwrap()
                    .compose(&section)
                    .unwrap()
            },
        )?;
        let projection = SheafMorphism::from_fn_range(g, &object, range, proj)?;
        Ok(Cokernel { object, projection })
    }

    /// Lifts `h: Y -> G` through a monomorphism `self: F -> G` when `h`
    /// factors, giving `Y -> F`.
    pub fn factor_through_mono(&self, h: &SheafMorphism) -> Option<SheafMorphism> {
        let range = model_range(
            self.source().space(),
            &[
                self.window(),
                h.window(),
                self.source().window(),
                h.source().window(),
            ],
        );
        let comps: Option<Vec<(Cell, LinearMap)>> = (range.0..=range.1)
            .filter(|&c| self.source().space().contains_cell(c))
            .map(|c| {
                self.component(c)
                    .solve_matrix(&h.component(c))
                    .map(|m| (c, m))
            })
            .collect();
        let comps = comps?;
        SheafMorphism::from_fn_range(h.source(), self.source(), range, |c| {
            comps
                .iter()
                .find(|(d, _)| *d == c.clamp(range.0, range.1))
                .unwrap()
                .1
                .clone()
        })
        .ok()
    }

    /// Cellwise tensor product of morphisms.
    pub fn tensor(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        let s = self.source().tensor(other.source())?;
        let t = self.target().tensor(other.target())?;
        let range = model_range(s.space(), &[self.model_range(), other.model_range()]);
        SheafMorphism::from_fn_range(&s, &t, range, |c| {
            self.component(c).tensor(&other.component(c))
        })
    }

    /// Relabeling of a line morphism, matching [`Sheaf::relabel`].
    pub(crate) fn relabel(
        &self,
        source: &Sheaf,
        target: &Sheaf,
        range: (Cell, Cell),
        src: impl Fn(Cell) -> Cell,
    ) -> Result<SheafMorphism> {
        SheafMorphism::from_fn_range(source, target, range, |c| self.component(src(c)))
    }

    pub fn shift(&self, s: i64) -> Result<SheafMorphism> {
        let (a, b) = (self.source().shift(s)?, self.target().shift(s)?);
        let (lo, hi) = self.model_range();
        self.relabel(&a, &b, (lo + 2 * s, hi + 2 * s), |c| c - 2 * s)
    }

    pub fn stretch(&self, a: i64, b: i64, l: i64, r: i64) -> Result<SheafMorphism> {
        let (s, t) = (
            self.source().stretch(a, b, l, r)?,
            self.target().stretch(a, b, l, r)?,
        );
        let range = stretch_range(self.model_range(), a, b, l, r);
        self.relabel(&s, &t, range, stretch_source(a, b, l, r))
    }

    /// `F_Z -> G_Z` induced on restrictions to a locally closed set.
    pub fn restrict_locally_closed(&self, z: &LocallyClosedSet) -> Result<SheafMorphism> {
        let s = self.source().restrict_locally_closed(z)?;
        let t = self.target().restrict_locally_closed(z)?;
        let range = model_range(s.space(), &[self.model_range(), z.as_cells().window()]);
        SheafMorphism::from_fn_range(&s, &t, range, |c| {
            if z.contains(c) {
                self.component(c)
            } else {
                LinearMap::zero(s.field(), 0, 0)
            }
        })
    }

    /// Induced map `hom(G, F) -> hom(G, F')` for `self: F -> F'`.
    pub fn hom_sheaf_post(&self, g: &Sheaf) -> Result<SheafMorphism> {
        let s = g.hom_sheaf(self.source())?;
        let t = g.hom_sheaf(self.target())?;
        let range = model_range(s.space(), &[self.model_range(), g.window()]);
        SheafMorphism::from_fn_range(&s, &t, range, |c| {
            let cells = s.star_cells(c);
            let (os, ss) = g.local_hom(self.source(), &cells);
            let (ot, st) = g.local_hom(self.target(), &cells);
            let cols: Vec<Vec<Scalar>> = ss
                .basis()
                .iter()
                .map(|v| {
                    let mut w = Vec::new();
                    for (i, &x) in cells.iter().enumerate() {
                        let phi = LinearMap::from_scalar_rows(
                            g.field(),
                            g.dim(x),
                            (0..self.source().dim(x))
                                .map(|a| {
                                    v[os[i] + a * g.dim(x)..os[i] + (a + 1) * g.dim(x)].to_vec()
                                })
                                .collect(),
                        )
                        .unwrap();
                        let moved = self.component(x).compose(&phi).unwrap();
                        debug_assert_eq!(moved.entries().len(), ot[i + 1] - ot[i]);
                        w.extend(moved.entries().iter().cloned());
                    }
                    st.coordinates(&w)
                        .expect("post-composition of a local morphism")
                })
                .collect();
            LinearMap::from_columns(g.field(), st.dim(), &cols)
        })
    }
}

/// `F ⊕ G` with its two inclusions and two projections.
pub fn biproduct(f: &Sheaf, g: &Sheaf) -> Result<(Sheaf, [SheafMorphism; 4])> {
    let s = f.direct_sum(g)?;
    let field = f.field();
    let range = model_range(s.space(), &[f.window(), g.window()]);
    let block = |c: Cell, first: bool, into: bool| {
        let (a, b) = (f.dim(c), g.dim(c));
        let n = a + b;
        let mut m = if into {
            LinearMap::zero(field, if first { a } else { b }, n)
        } else {
            LinearMap::zero(field, n, if first { a } else { b })
        };
        let (k, off) = if first { (a, 0) } else { (b, a) };
        for i in 0..k {
            if into {
                m.set(off + i, i, field.one());
            } else {
                m.set(i, off + i, field.one());
            }
        }
        m
    };
    Ok((
        s.clone(),
        [
            SheafMorphism::from_fn_range(f, &s, range, |c| block(c, true, true))?,
            SheafMorphism::from_fn_range(g, &s, range, |c| block(c, false, true))?,
            SheafMorphism::from_fn_range(&s, f, range, |c| block(c, true, false))?,
            SheafMorphism::from_fn_range(&s, g, range, |c| block(c, false, false))?,
        ],
    ))
}

impl HomSpace {
    /// The linear map `Hom(F, G) -> Hom(F', G)` given by precomposition with
    /// `m: F' -> F`, in the bases of both spaces.
    pub fn precompose_map(&self, m: &SheafMorphism, onto: &HomSpace) -> Result<LinearMap> {
        let cols: Result<Vec<Vec<Scalar>>> = self
            .basis()
            .iter()
            .map(|b| onto.coordinates(&b.compose(m)?))
            .collect();
        Ok(LinearMap::from_columns(
            self.source().field(),
            onto.dim(),
            &cols?,
        ))
    }

    /// The linear map `Hom(F, G) -> Hom(F, G')` given by postcomposition.
    pub fn postcompose_map(&self, m: &SheafMorphism, onto: &HomSpace) -> Result<LinearMap> {
        let cols: Result<Vec<Vec<Scalar>>> = self
            .basis()
            .iter()
            .map(|b| onto.coordinates(&m.compose(b)?))
            .collect();
        Ok(LinearMap::from_columns(
            self.source().field(),
            onto.dim(),
            &cols?,
        ))
    }
}
