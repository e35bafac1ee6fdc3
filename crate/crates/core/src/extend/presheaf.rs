//! Presheaves on bounded opens and the Mayer–Vietoris check.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::indcat::{hom_from_sheaf, ColimSpace, Dim, SeqSystem, Tag};
use crate::linalg::{Field, LinearMap, Scalar};
use crate::sheaf::{Sections, Sheaf, SheafMorphism};
use crate::space::{Cell, OpenSet, Space};

/// A presheaf given by a finite table: values on listed opens and
/// restriction matrices along listed inclusions. Other inclusions between
/// listed opens are composites of listed ones.
#[derive(Clone, Debug)]
pub struct Table {
    values: Vec<(OpenSet, usize)>,
    maps: Vec<(usize, usize, LinearMap)>,
}

impl Table {
    pub fn new(
        values: Vec<(OpenSet, usize)>,
        maps: Vec<(OpenSet, OpenSet, LinearMap)>,
    ) -> Result<Table> {
        let index = |u: &OpenSet| {
            values
                .iter()
                .position(|(w, _)| w == u)
                .ok_or_else(|| Error::InvalidOpenSet(format!("{u} has no value in the table")))
        };
        let mut listed = Vec::new();
        for (u, v, m) in maps {
            if !v.is_subset(&u) {
                return Err(Error::InvalidOpenSet(format!("{v} is not inside {u}")));
            }
            let (i, j) = (index(&u)?, index(&v)?);
            if m.domain_dim() != values[i].1 || m.codomain_dim() != values[j].1 {
                return Err(Error::DimensionMismatch(format!("restriction {u} -> {v}")));
            }
            listed.push((i, j, m));
        }
        Ok(Table {
            values,
            maps: listed,
        })
    }

    fn index(&self, u: &OpenSet) -> Option<usize> {
        self.values.iter().position(|(w, _)| w == u)
    }

    fn dim(&self, u: &OpenSet) -> Result<usize> {
        match self.index(u) {
            Some(i) => Ok(self.values[i].1),
            None if u.is_empty() => Ok(0),
            None => Err(Error::Unsupported(format!("{u} has no value in the table"))),
        }
    }

    /// Composite of listed maps from `u` down to `v`, found breadth first.
    fn restriction(&self, field: Field, u: &OpenSet, v: &OpenSet) -> Result<LinearMap> {
        if u == v {
            return Ok(LinearMap::identity(field, self.dim(u)?));
        }
        if v.is_empty() {
            return Ok(LinearMap::zero(field, self.dim(u)?, 0));
        }
        let missing = || Error::Unsupported(format!("no restriction {u} -> {v} in the table"));
        let (start, goal) = (
            self.index(u).ok_or_else(missing)?,
            self.index(v).ok_or_else(missing)?,
        );
        let mut seen: HashMap<usize, LinearMap> = HashMap::new();
        seen.insert(start, LinearMap::identity(field, self.values[start].1));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            if i == goal {
                return Ok(seen[&i].clone());
            }
            for (a, b, m) in &self.maps {
                if *a == i && !seen.contains_key(b) {
                    let path = m.compose(&seen[&i])?;
                    seen.insert(*b, path);
                    queue.push_back(*b);
                }
            }
        }
        Err(missing())
    }
}

#[derive(Clone, Debug)]
pub enum PresheafKind {
    /// `U ↦ G(U)` for a sheaf `G`.
    Sections(Sheaf),
    /// `U ↦ ∏_{c ∈ U} k`, restrictions forgetting coordinates.
    CellFunctions,
    /// Cell functions supported in the cells `-bound..=bound`.
    BoundedCellFunctions(i64),
    /// `k` on every nonempty open with identity restrictions.
    ConstantOnNonempty,
    Table(Table),
    /// `U ↦ Hom(k_U, X)`.
    Rho(SeqSystem),
}

/// A presheaf of finite-dimensional spaces on the bounded opens of a space.
#[derive(Clone, Debug)]
pub struct PresheafOnT {
    space: Space,
    field: Field,
    kind: PresheafKind,
}

impl PresheafOnT {
    pub fn new(space: &Space, field: Field, kind: PresheafKind) -> Result<PresheafOnT> {
        let (s, k) = match &kind {
            PresheafKind::Sections(g) => (g.space(), g.field()),
            PresheafKind::Rho(x) => (x.space(), x.field()),
            _ => (space, field),
        };
        if s != space || k != field {
            return Err(Error::SpaceMismatch("presheaf data lives elsewhere".into()));
        }
        Ok(PresheafOnT {
            space: space.clone(),
            field,
            kind,
        })
    }

    pub fn sections(g: &Sheaf) -> PresheafOnT {
        PresheafOnT {
            space: g.space().clone(),
            field: g.field(),
            kind: PresheafKind::Sections(g.clone()),
        }
    }

    pub fn cell_functions(space: &Space, field: Field) -> PresheafOnT {
        PresheafOnT {
            space: space.clone(),
            field,
            kind: PresheafKind::CellFunctions,
        }
    }

    pub fn bounded_cell_functions(space: &Space, field: Field, bound: i64) -> PresheafOnT {
        PresheafOnT {
            space: space.clone(),
            field,
            kind: PresheafKind::BoundedCellFunctions(bound),
        }
    }

    pub fn constant_on_nonempty(space: &Space, field: Field) -> PresheafOnT {
        PresheafOnT {
            space: space.clone(),
            field,
            kind: PresheafKind::ConstantOnNonempty,
        }
    }

    pub fn table(space: &Space, field: Field, table: Table) -> PresheafOnT {
        PresheafOnT {
            space: space.clone(),
            field,
            kind: PresheafKind::Table(table),
        }
    }

    pub fn rho(x: &SeqSystem) -> PresheafOnT {
        PresheafOnT {
            space: x.space().clone(),
            field: x.field(),
            kind: PresheafKind::Rho(x.clone()),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &PresheafKind {
        &self.kind
    }

    /// `dim F(U)`.
    pub fn dim(&self, u: &OpenSet) -> Result<usize> {
        Ok(Values::new(self).get(u)?.dim())
    }

    /// `F(U) -> F(V)` for `V ⊆ U`.
    pub fn restriction(&self, u: &OpenSet, v: &OpenSet) -> Result<LinearMap> {
        Values::new(self).restriction(u, v)
    }
}

/// A value `F(U)` with enough structure to build restriction maps.
#[derive(Clone, Debug)]
enum Value {
    Sections(Sections),
    Cells(Vec<Cell>),
    Dim(usize),
    Colim(Box<ColimSpace>, Sheaf),
}

impl Value {
    fn dim(&self) -> usize {
        match self {
            Value::Sections(s) => s.dim(),
            Value::Cells(c) => c.len(),
            Value::Dim(d) => *d,
            Value::Colim(c, _) => c.quotient().codomain_dim(),
        }
    }
}

/// Memoized values of one presheaf, so that every map built from the same
/// table uses the same bases.
pub(crate) struct Values<'a> {
    f: &'a PresheafOnT,
    cache: HashMap<OpenSet, Value>,
    tag: Tag,
}

impl<'a> Values<'a> {
    pub(crate) fn new(f: &'a PresheafOnT) -> Values<'a> {
        Values {
            f,
            cache: HashMap::new(),
            tag: Tag::Exact,
        }
    }

    /// The weakest tag among the Hom computations used so far.
    pub(crate) fn tag(&self) -> Tag {
        self.tag
    }

    fn compute(&mut self, u: &OpenSet) -> Result<Value> {
        if u.space() != &self.f.space {
            return Err(Error::SpaceMismatch("open set on another space".into()));
        }
        if !u.is_bounded() {
            return Err(Error::Refused(format!("{u} is not a bounded open")));
        }
        let cells = || u.cells().listed_cells().collect::<Vec<_>>();
        Ok(match &self.f.kind {
            PresheafKind::Sections(g) => Value::Sections(g.sections(u)?),
            PresheafKind::CellFunctions => Value::Cells(cells()),
            PresheafKind::BoundedCellFunctions(b) => {
                Value::Cells(cells().into_iter().filter(|c| c.abs() <= *b).collect())
            }
            PresheafKind::ConstantOnNonempty => Value::Dim(usize::from(!u.is_empty())),
            PresheafKind::Table(t) => Value::Dim(t.dim(u)?),
            PresheafKind::Rho(x) => {
                let k_u = Sheaf::constant_on_open(u, self.f.field);
                let c = hom_from_sheaf(&k_u, x)?;
                if matches!(c.dim(), Dim::Infinite) {
                    return Err(Error::Unsupported(format!(
                        "Hom(k_U, X) is infinite for U = {u}"
                    )));
                }
                self.tag = self.tag.meet(c.tag());
                Value::Colim(Box::new(c), k_u)
            }
        })
    }

    fn get(&mut self, u: &OpenSet) -> Result<&Value> {
        if !self.cache.contains_key(u) {
            let v = self.compute(u)?;
            self.cache.insert(u.clone(), v);
        }
        Ok(&self.cache[u])
    }

    pub(crate) fn dim(&mut self, u: &OpenSet) -> Result<usize> {
        Ok(self.get(u)?.dim())
    }

    pub(crate) fn restriction(&mut self, u: &OpenSet, v: &OpenSet) -> Result<LinearMap> {
        if !v.is_subset(u) {
            return Err(Error::InvalidOpenSet(format!("{v} is not inside {u}")));
        }
        let field = self.f.field;
        let big = self.get(u)?.clone();
        let small = self.get(v)?.clone();
        match (&big, &small) {
            (Value::Sections(a), Value::Sections(b)) => a.restriction_to(b),
            (Value::Cells(a), Value::Cells(b)) => {
                let mut m = LinearMap::zero(field, a.len(), b.len());
                for (i, c) in b.iter().enumerate() {
                    let j = a
                        .iter()
                        .position(|d| d == c)
                        .expect("smaller open has fewer cells");
                    m.set(i, j, field.one());
                }
                Ok(m)
            }
            (Value::Dim(a), Value::Dim(b)) => match &self.f.kind {
                PresheafKind::Table(t) => t.restriction(field, u, v),
                _ if *b == 0 => Ok(LinearMap::zero(field, *a, 0)),
                _ => Ok(LinearMap::identity(field, *a)),
            },
            (Value::Colim(a, k_u), Value::Colim(b, k_v)) => {
                let PresheafKind::Rho(x) = &self.f.kind else {
                    unreachable!()
                };
                let incl = k_u.open_inclusion(v)?;
                let cols: Vec<Vec<Scalar>> = (0..big.dim())
                    .map(|i| {
                        let mut e = vec![field.zero(); big.dim()];
                        e[i] = field.one();
                        let m = a.representative(&e).compose(&incl)?;
                        let m = SheafMorphism::from_fn(k_v, m.target(), |c| m.component(c))?;
                        b.class_at(&m, a.stage(), x, crate::indcat::DEFAULT_TRUNCATION)
                    })
                    .collect::<Result<_>>()?;
                Ok(LinearMap::from_columns(field, small.dim(), &cols))
            }
            _ => unreachable!("values of one presheaf share a shape"),
        }
    }
}

/// Exactness of `0 -> F(U∪V) -> F(U)⊕F(V) -> F(U∩V)` for one pair.
#[derive(Clone, Debug)]
pub struct MvLine {
    pub u: OpenSet,
    pub v: OpenSet,
    pub union_dim: usize,
    pub sum_dim: usize,
    pub intersection_dim: usize,
    pub injective: bool,
    pub exact_in_middle: bool,
}

impl MvLine {
    pub fn holds(&self) -> bool {
        self.injective && self.exact_in_middle
    }
}

/// The two Mayer–Vietoris conditions on a list of pairs.
#[derive(Clone, Debug)]
pub struct MvReport {
    pub empty_dim: usize,
    pub lines: Vec<MvLine>,
    pub tag: Tag,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.empty_dim == 0 && self.lines.iter().all(MvLine::holds)
    }

    pub fn first_violation(&self) -> Option<&MvLine> {
        self.lines.iter().find(|l| !l.holds())
    }
}

impl fmt::Display for MvReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# Mayer-Vietoris check")?;
        writeln!(
            f,
            "empty dim {} {}",
            self.empty_dim,
            if self.empty_dim == 0 { "pass" } else { "fail" }
        )?;
        for l in &self.lines {
            writeln!(
                f,
                "pair U{} V{} union {} sum {} meet {} {}",
                l.u,
                l.v,
                l.union_dim,
                l.sum_dim,
                l.intersection_dim,
                if l.holds() { "pass" } else { "fail" }
            )?;
        }
        write!(
            f,
            "result {} [{}]",
            if self.passed() { "pass" } else { "fail" },
            self.tag
        )
    }
}

pub(crate) fn mv_line(values: &mut Values, u: &OpenSet, v: &OpenSet) -> Result<MvLine> {
    let union = u.union(v)?;
    let meet = u.intersection(v)?;
    let to_u = values.restriction(&union, u)?;
    let to_v = values.restriction(&union, v)?;
    let from_u = values.restriction(u, &meet)?;
    let from_v = values.restriction(v, &meet)?;
    let r = to_u.vstack(&to_v)?;
    let d = from_u.hstack(&from_v.neg())?;
    let complex = d.compose(&r)?.is_zero();
    let kernel = d.kernel().dim();
    Ok(MvLine {
        u: u.clone(),
        v: v.clone(),
        union_dim: r.domain_dim(),
        sum_dim: r.codomain_dim(),
        intersection_dim: d.codomain_dim(),
        injective: r.is_injective(),
        exact_in_middle: complex && r.rank() == kernel,
    })
}

/// Checks `F(∅) = 0` and the Mayer–Vietoris sequence on every pair.
pub fn check_mv(f: &PresheafOnT, pairs: &[(OpenSet, OpenSet)]) -> Result<MvReport> {
    let mut values = Values::new(f);
    let empty_dim = values.dim(&OpenSet::empty(&f.space))?;
    let lines = pairs
        .iter()
        .map(|(u, v)| mv_line(&mut values, u, v))
        .collect::<Result<_>>()?;
    Ok(MvReport {
        empty_dim,
        lines,
        tag: values.tag(),
    })
}
