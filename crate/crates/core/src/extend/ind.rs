//! `F⁺` through its Hom functor: `Hom(G, F⁺)` from a presentation of `G`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use super::presheaf::{mv_line, PresheafOnT, Values};
use crate::error::{Error, Result};
use crate::indcat::{SeqSystem, Tag};
use crate::linalg::{LinearMap, Scalar, Subspace};
use crate::sheaf::{Presentation, PresentationStyle, Sheaf, SheafMorphism};
use crate::space::OpenSet;

/// The ind-object `F⁺` attached to a Mayer–Vietoris presheaf, known through
/// `G ↦ Hom(G, F⁺)`. Pairs of opens are checked the first time an
/// evaluation meets them.
#[derive(Debug)]
pub struct FunctorBackedInd {
    presheaf: PresheafOnT,
    checked: Mutex<HashMap<(OpenSet, OpenSet), bool>>,
}

/// `Hom(G, F⁺)` as a subspace of `∏ F(U_i)` over the generators of a
/// presentation of `G`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub generators: Vec<OpenSet>,
    pub product_dims: Vec<usize>,
    pub kernel: Subspace,
    pub tag: Tag,
}

impl Evaluation {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim = {} [{}]", self.dim(), self.tag)
    }
}

/// The map `Hom(G', F⁺) -> Hom(G, F⁺)` induced by `G -> G'`, in the kernel
/// bases of the two evaluations.
#[derive(Clone, Debug)]
pub struct EvaluatedMorphism {
    pub source: Evaluation,
    pub target: Evaluation,
    pub map: LinearMap,
}

pub fn extend(f: &PresheafOnT) -> FunctorBackedInd {
    FunctorBackedInd {
        presheaf: f.clone(),
        checked: Mutex::new(HashMap::new()),
    }
}

/// `G ↦ Hom(G, X)` as a functor-backed object. Only bounded probes are
/// accepted.
pub fn rho_view(x: &SeqSystem) -> FunctorBackedInd {
    extend(&PresheafOnT::rho(x))
}

/// Pairs `(W_k, star c_k)` building `u` from the stars of its minimal
/// cells, `W_{k+1} = W_k ∪ star c_k`. Empty when `u` is a star.
fn star_chain(u: &OpenSet) -> Result<Vec<(OpenSet, OpenSet)>> {
    let space = u.space();
    if !u.is_bounded() {
        return Err(Error::Refused(format!("{u} is not a bounded open")));
    }
    let minimal: Vec<_> = u
        .cells()
        .listed_cells()
        .filter(|&c| space.down_covers(c).into_iter().all(|d| !u.contains(d)))
        .collect();
    let mut out = Vec::new();
    let mut acc = match minimal.first() {
        Some(&c) => space.star(c),
        None => return Ok(out),
    };
    for &c in &minimal[1..] {
        let s = space.star(c);
        out.push((acc.clone(), s.clone()));
        acc = acc.union(&s)?;
    }
    Ok(out)
}

fn distinct(opens: impl IntoIterator<Item = OpenSet>) -> Vec<OpenSet> {
    let mut out: Vec<OpenSet> = Vec::new();
    for u in opens {
        if !out.contains(&u) {
            out.push(u);
        }
    }
    out
}

impl FunctorBackedInd {
    pub fn presheaf(&self) -> &PresheafOnT {
        &self.presheaf
    }

    /// Number of pairs validated so far.
    pub fn checked_pairs(&self) -> usize {
        self.checked.lock().unwrap().len()
    }

    /// `F(∅) = 0` and the Mayer–Vietoris sequence for every pair of the
    /// given opens, each pair at most once.
    fn validate(&self, values: &mut Values, opens: &[OpenSet]) -> Result<()> {
        let empty = OpenSet::empty(self.presheaf.space());
        if values.dim(&empty)? != 0 {
            return Err(Error::MayerVietoris("F(∅) is not zero".into()));
        }
        let mut pairs: Vec<(OpenSet, OpenSet)> = Vec::new();
        for (a, u) in opens.iter().enumerate() {
            pairs.extend(star_chain(u)?);
            pairs.extend(opens[a + 1..].iter().map(|v| (u.clone(), v.clone())));
        }
        for (u, v) in &pairs {
            let key = (u.clone(), v.clone());
            let known = self.checked.lock().unwrap().get(&key).copied();
            let holds = match known {
                Some(h) => h,
                None => {
                    let h = mv_line(values, u, v)?.holds();
                    self.checked.lock().unwrap().insert(key, h);
                    h
                }
            };
            if !holds {
                return Err(Error::MayerVietoris(format!("pair U{u} V{v}")));
            }
        }
        Ok(())
    }

    /// `Hom(G, F⁺)` from the minimal presentation of `G`.
    pub fn evaluate(&self, g: &Sheaf) -> Result<Evaluation> {
        self.evaluate_presented(&Presentation::of(g)?)
    }

    pub fn evaluate_with(&self, g: &Sheaf, style: PresentationStyle) -> Result<Evaluation> {
        self.evaluate_presented(&Presentation::with_style(g, style)?)
    }

    /// `ker(∏ F(U_i) -> ∏ F(V_j))`, the map summing `c_ij · F(U_i) -> F(V_j)`.
    pub fn evaluate_presented(&self, p: &Presentation) -> Result<Evaluation> {
        let mut values = Values::new(&self.presheaf);
        self.kernel_of(&mut values, p)
    }

    fn kernel_of(&self, values: &mut Values, p: &Presentation) -> Result<Evaluation> {
        if p.target().space() != self.presheaf.space()
            || p.target().field() != self.presheaf.field()
        {
            return Err(Error::SpaceMismatch("probe lives elsewhere".into()));
        }
        let gens = p.generator_opens();
        let rels = p.relation_opens();
        self.validate(values, &distinct(gens.iter().chain(&rels).cloned()))?;
        let field = self.presheaf.field();
        let gdims: Vec<usize> = gens.iter().map(|u| values.dim(u)).collect::<Result<_>>()?;
        let rdims: Vec<usize> = rels.iter().map(|v| values.dim(v)).collect::<Result<_>>()?;
        let coeff = p.coefficients();
        let mut rows = LinearMap::zero(field, 0, 0);
        for (j, v) in rels.iter().enumerate() {
            let mut row = LinearMap::zero(field, 0, rdims[j]);
            for (i, u) in gens.iter().enumerate() {
                let c = coeff.get(i, j);
                let block = if c.is_zero() {
                    LinearMap::zero(field, gdims[i], rdims[j])
                } else {
                    values.restriction(u, v)?.scale(c)
                };
                row = row.hstack(&block)?;
            }
            rows = if j == 0 { row } else { rows.vstack(&row)? };
        }
        let total: usize = gdims.iter().sum();
        let kernel = if rels.is_empty() {
            Subspace::full(field, total)
        } else {
            rows.kernel()
        };
        Ok(Evaluation {
            generators: gens,
            product_dims: gdims,
            kernel,
            tag: values.tag(),
        })
    }

    /// The map `Hom(G', F⁺) -> Hom(G, F⁺)` induced by `phi: G -> G'`. Both
    /// sides are presented by stars so that `phi` lifts to generators.
    pub fn evaluate_morphism(&self, phi: &SheafMorphism) -> Result<EvaluatedMorphism> {
        self.evaluate_morphism_with(phi, PresentationStyle::Minimal)
    }

    pub fn evaluate_morphism_with(
        &self,
        phi: &SheafMorphism,
        style: PresentationStyle,
    ) -> Result<EvaluatedMorphism> {
        let p = Presentation::by_stars(phi.source(), style)?;
        let q = Presentation::by_stars(phi.target(), style)?;
        let mut values = Values::new(&self.presheaf);
        let target = self.kernel_of(&mut values, &p)?;
        let source = self.kernel_of(&mut values, &q)?;
        let lift = lift(phi, &p, &q)?;
        let field = self.presheaf.field();
        let space = phi.source().space();
        // ∏ F(U'_k) -> ∏ F(U_i): block (i, k) is lift[k][i] · F(U'_k) -> F(U_i)
        let mut m = LinearMap::zero(field, 0, 0);
        for (i, u) in target.generators.iter().enumerate() {
            let mut row = LinearMap::zero(field, 0, target.product_dims[i]);
            for (k, w) in source.generators.iter().enumerate() {
                let c = lift.get(k, i);
                let block =
                    if c.is_zero() || !space.leq(q.generator_cells()[k], p.generator_cells()[i]) {
                        LinearMap::zero(field, source.product_dims[k], target.product_dims[i])
                    } else {
                        values.restriction(w, u)?.scale(c)
                    };
                row = row.hstack(&block)?;
            }
            m = if i == 0 { row } else { m.vstack(&row)? };
        }
        let total_src: usize = source.product_dims.iter().sum();
        if target.generators.is_empty() {
            m = LinearMap::zero(field, total_src, 0);
        }
        let cols: Vec<Vec<Scalar>> = source
            .kernel
            .basis()
            .iter()
            .map(|b| {
                let img = m.apply(b);
                target
                    .kernel
                    .coordinates(&img)
                    .ok_or_else(|| Error::NotAMorphism("induced map leaves the kernel".into()))
            })
            .collect::<Result<_>>()?;
        let map = LinearMap::from_columns(field, target.dim(), &cols);
        Ok(EvaluatedMorphism {
            source,
            target,
            map,
        })
    }
}

/// Lifts `phi: G -> G'` to the generators: entry `(k, i)` is the scalar of
/// `k_{star c_i} -> k_{star c'_k}` in a chain map between presentations.
fn lift(phi: &SheafMorphism, p: &Presentation, q: &Presentation) -> Result<LinearMap> {
    let field = phi.source().field();
    let space = phi.source().space();
    let (pc, qc) = (p.generator_cells(), q.generator_cells());
    let mut out = LinearMap::zero(field, pc.len(), qc.len());
    for (i, &c) in pc.iter().enumerate() {
        let pos = pc[..i].iter().filter(|&&d| space.leq(d, c)).count();
        let v = phi
            .component(c)
            .apply(&p.augmentation().component(c).column(pos));
        let x = q
            .augmentation()
            .component(c)
            .solve(&v)
            .ok_or_else(|| Error::NotAMorphism("presentation is not onto a stalk".into()))?;
        let below: Vec<usize> = (0..qc.len()).filter(|&k| space.leq(qc[k], c)).collect();
        for (slot, &k) in below.iter().enumerate() {
            out.set(k, i, x[slot].clone());
        }
    }
    Ok(out)
}
