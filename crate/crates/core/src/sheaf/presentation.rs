//! Presentations `⊕ k_{V_j} -> ⊕ k_{U_i} -> F -> 0` by sheaves on opens.
//!
//! Generators are stars of cells, except for the trivial presentation of a
//! sheaf `k_U`, which uses `U` itself. Relations are always stars, so a map
//! `k_{star d} -> k_U` is a single scalar (nonzero only when `d ∈ U`) and the
//! whole differential is recorded as a coefficient matrix.

use super::{Sheaf, SheafMorphism};
use crate::error::{Error, Result};
use crate::linalg::{Field, LinearMap, Scalar, Subspace};
use crate::space::{Cell, CellSet, OpenSet, Space};

/// How generators are chosen at each cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationStyle {
    /// Only vectors not already reached from lower cells.
    Minimal,
    /// A full basis of every stalk.
    Full,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    generators: Vec<(OpenSet, usize)>,
    generator_cells: Vec<Cell>,
    relations: Vec<(OpenSet, usize)>,
    coefficients: LinearMap,
    zeroth: Sheaf,
    first: Sheaf,
    differential: SheafMorphism,
    augmentation: SheafMorphism,
}

/// A sum of sheaves `k_{star c}` mapping onto `F`, one summand per vector.
struct StarCover {
    cells: Vec<Cell>,
    sum: Sheaf,
    onto: SheafMorphism,
}

fn star_cover(f: &Sheaf, style: PresentationStyle) -> Result<StarCover> {
    let space = f.space();
    let field = f.field();
    let mut gens: Vec<(Cell, Vec<Scalar>)> = Vec::new();
    for c in f.support()? {
        let d = f.dim(c);
        let reached = match style {
            PresentationStyle::Full => Subspace::zero(field, d),
            PresentationStyle::Minimal => space
                .down_covers(c)
                .into_iter()
                .map(|b| f.gen(b, c).image())
                .fold(Subspace::zero(field, d), |acc, s| acc.sum(&s)),
        };
        let mut span = reached;
        for i in 0..d {
            let mut e = vec![field.zero(); d];
            e[i] = field.one();
            if !span.contains(&e) {
                span = span.sum(&Subspace::span(field, d, vec![e.clone()]));
                gens.push((c, e));
            }
        }
    }
    let sum = gens
        .iter()
        .try_fold(Sheaf::zero(space, field), |acc, (c, _)| {
            acc.direct_sum(&Sheaf::constant_on_open(&space.star(*c), field))
        })?;
    let onto = SheafMorphism::from_fn(&sum, f, |x| {
        let cols: Vec<Vec<Scalar>> = gens
            .iter()
            .filter(|(c, _)| space.contains_cell(x) && space.leq(*c, x))
            .map(|(c, v)| f.map_between(*c, x).apply(v))
            .collect();
        LinearMap::from_columns(field, f.dim(x), &cols)
    })?;
    Ok(StarCover {
        cells: gens.into_iter().map(|(c, _)| c).collect(),
        sum,
        onto,
    })
}

fn group(space: &Space, cells: &[Cell]) -> Vec<(OpenSet, usize)> {
    let mut out: Vec<(Cell, usize)> = Vec::new();
    for &c in cells {
        match out.last_mut() {
            Some((d, m)) if *d == c => *m += 1,
            _ => out.push((c, 1)),
        }
    }
    out.into_iter().map(|(c, m)| (space.star(c), m)).collect()
}

/// The open `U` when `f` is literally `k_U` (rank one on `U`, identity maps).
fn as_constant_on_open(f: &Sheaf) -> Option<OpenSet> {
    let (lo, hi) = f.window();
    if f.is_zero() || (lo..=hi).any(|c| f.dim(c) > 1) || f.tails().0 > 1 || f.tails().1 > 1 {
        return None;
    }
    let cells = (lo..=hi).filter(|&c| f.space().contains_cell(c) && f.dim(c) == 1);
    let set = match f.space() {
        Space::Poset(_) => CellSet::from_cells(f.space(), cells).ok()?,
        Space::Line => {
            CellSet::line_window(lo, hi, cells.collect(), f.tails().0 == 1, f.tails().1 == 1)
        }
    };
    let u = OpenSet::new(set).ok()?;
    f.same_as(&Sheaf::constant_on_open(&u, f.field()))
        .then_some(u)
}

impl Presentation {
    /// A presentation with minimal generators.
    pub fn of(f: &Sheaf) -> Result<Presentation> {
        Presentation::with_style(f, PresentationStyle::Minimal)
    }

    /// Presents `f`. A sheaf of the form `k_U` gets the trivial presentation;
    /// anything else needs bounded support.
    pub fn with_style(f: &Sheaf, style: PresentationStyle) -> Result<Presentation> {
        if let Some(u) = as_constant_on_open(f) {
            return Ok(Presentation::trivial(&u, f.field()));
        }
        Presentation::by_stars(f, style)
    }

    /// Presents `f` with star generators even when `f` is some `k_U`. Every
    /// generator `k_{star c}` then carries a vector of the stalk `f_c`, which
    /// is what lifting morphisms needs.
    pub fn by_stars(f: &Sheaf, style: PresentationStyle) -> Result<Presentation> {
        if !f.has_bounded_support() {
            return Err(Error::UnboundedSupport(
                "presentations need bounded support".into(),
            ));
        }
        let space = f.space();
        let field = f.field();
        let top = star_cover(f, style)?;
        let ker = top.onto.kernel()?;
        let rel = star_cover(&ker.object, style)?;
        let differential = ker.inclusion.compose(&rel.onto)?;
        let mut coefficients = LinearMap::zero(field, rel.cells.len(), top.cells.len());
        for (j, &d) in rel.cells.iter().enumerate() {
            let col = differential
                .component(d)
                .column(rel_index(&rel.cells, j, space, d));
            let mut k = 0;
            for (i, &c) in top.cells.iter().enumerate() {
                if space.leq(c, d) {
                    coefficients.set(i, j, col[k].clone());
                    k += 1;
                }
            }
        }
        Ok(Presentation {
            generators: group(space, &top.cells),
            generator_cells: top.cells,
            relations: group(space, &rel.cells),
            coefficients,
            zeroth: top.sum,
            first: rel.sum,
            differential,
            augmentation: top.onto,
        })
    }

    /// The presentation of `k_U` by itself, with no relations.
    pub fn trivial(u: &OpenSet, field: Field) -> Presentation {
        let k_u = Sheaf::constant_on_open(u, field);
        let zero = Sheaf::zero(u.space(), field);
        Presentation {
            generators: vec![(u.clone(), 1)],
            generator_cells: Vec::new(),
            relations: Vec::new(),
            coefficients: LinearMap::zero(field, 0, 1),
            differential: SheafMorphism::zero(&zero, &k_u).unwrap(),
            augmentation: SheafMorphism::identity(&k_u),
            zeroth: k_u,
            first: zero,
        }
    }

    /// Generator opens with multiplicities.
    pub fn generators(&self) -> &[(OpenSet, usize)] {
        &self.generators
    }

    /// The cell `c` of each generator summand `k_{star c}`, in summand
    /// order. Empty for the trivial presentation of `k_U`.
    pub fn generator_cells(&self) -> &[Cell] {
        &self.generator_cells
    }

    pub fn relations(&self) -> &[(OpenSet, usize)] {
        &self.relations
    }

    /// Generator opens repeated by multiplicity, in summand order.
    pub fn generator_opens(&self) -> Vec<OpenSet> {
        expand(&self.generators)
    }

    pub fn relation_opens(&self) -> Vec<OpenSet> {
        expand(&self.relations)
    }

    /// Column `j` holds the scalars of relation summand `j` in each generator
    /// summand.
    pub fn coefficients(&self) -> &LinearMap {
        &self.coefficients
    }

    /// `⊕ k_{U_i}`.
    pub fn zeroth(&self) -> &Sheaf {
        &self.zeroth
    }

    /// `⊕ k_{V_j}`.
    pub fn first(&self) -> &Sheaf {
        &self.first
    }

    pub fn differential(&self) -> &SheafMorphism {
        &self.differential
    }

    pub fn augmentation(&self) -> &SheafMorphism {
        &self.augmentation
    }

    /// The presented sheaf.
    pub fn target(&self) -> &Sheaf {
        self.augmentation.target()
    }

    /// Whether `F¹ -> F⁰ -> F -> 0` is exact: the composite vanishes, the
    /// augmentation is onto and the middle homology is zero at every cell.
    pub fn is_exact(&self) -> bool {
        let Ok(comp) = self.augmentation.compose(&self.differential) else {
            return false;
        };
        if !comp.is_zero() || !self.augmentation.is_epi() {
            return false;
        }
        let Ok(ker) = self.augmentation.kernel() else {
            return false;
        };
        ker.inclusion
            .factor_through_mono(&self.differential)
            .is_some_and(|m| m.is_epi())
    }
}

/// Position of summand `j` among the relation summands whose star contains `d`.
fn rel_index(cells: &[Cell], j: usize, space: &Space, d: Cell) -> usize {
    cells[..j].iter().filter(|&&e| space.leq(e, d)).count()
}

fn expand(list: &[(OpenSet, usize)]) -> Vec<OpenSet> {
    list.iter()
        .flat_map(|(u, m)| std::iter::repeat(u.clone()).take(*m))
        .collect()
}
