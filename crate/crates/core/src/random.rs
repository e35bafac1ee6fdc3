//! Seeded generators for random instances: posets, opens, sheaves, maps.
//!
//! Everything takes a caller-supplied RNG so runs are reproducible from a
//! seed. Random sheaves are cokernels of random morphisms between sums of
//! constant sheaves on stars and locally closed sets, so non-split
//! extensions show up as well as direct sums.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::indcat::{PeriodCert, SeqSystem};
use crate::linalg::{Field, Scalar};
use crate::sheaf::{biproduct, Sheaf, SheafMorphism};
use crate::space::{
    vertex, Cell, CellMap, CellSet, FinitePoset, LocallyClosedSet, MapKind, OpenSet, Space,
};

/// A small integer scalar in `-3..=3`.
pub fn scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    field.from_i64(rng.gen_range(-3..=3))
}

/// A random poset on `1..=max_size` cells; cell indices form a linear
/// extension.
pub fn poset<R: Rng>(rng: &mut R, max_size: usize) -> FinitePoset {
    let n = rng.gen_range(1..=max_size.max(1));
    let mut rel = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(0.35) {
                rel.push((i, j));
            }
        }
    }
    FinitePoset::new(n, &rel).expect("edges go up in index order")
}

/// A random connected poset (retries until connected).
pub fn connected_poset<R: Rng>(rng: &mut R, max_size: usize) -> FinitePoset {
    loop {
        let p = poset(rng, max_size);
        if is_connected(&p) {
            return p;
        }
    }
}

pub fn is_connected(p: &FinitePoset) -> bool {
    let n = p.size();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..n {
            if !seen[b] && (p.leq(a, b) || p.leq(b, a)) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Smallest open set containing `cells`.
pub fn open_hull(space: &Space, cells: impl IntoIterator<Item = Cell>) -> OpenSet {
    cells.into_iter().fold(OpenSet::empty(space), |acc, c| {
        acc.union(&space.star(c)).unwrap()
    })
}

/// A random open set. On the line the listed cells lie in
/// `[vertex(-bound), vertex(bound)]` and tails appear only when `bounded`
/// is false.
pub fn open<R: Rng>(rng: &mut R, space: &Space, bound: i64, bounded: bool) -> OpenSet {
    match space {
        Space::Poset(p) => open_hull(space, (0..p.size() as Cell).filter(|_| rng.gen_bool(0.3))),
        Space::Line => {
            let cells: Vec<Cell> = (vertex(-bound)..=vertex(bound))
                .filter(|_| rng.gen_bool(0.25))
                .collect();
            let mut u = open_hull(space, cells);
            if !bounded {
                if rng.gen_bool(0.4) {
                    u = u.union(&OpenSet::left_ray(-bound)).unwrap();
                }
                if rng.gen_bool(0.4) {
                    u = u.union(&OpenSet::right_ray(bound)).unwrap();
                }
            }
            u
        }
    }
}

/// A random nonempty bounded open set.
pub fn nonempty_bounded_open<R: Rng>(rng: &mut R, space: &Space, bound: i64) -> OpenSet {
    loop {
        let u = open(rng, space, bound, true);
        if !u.is_empty() {
            return u;
        }
    }
}

/// A random closed set, the complement of a random open set intersected
/// with a bounded window on the line.
pub fn closed<R: Rng>(rng: &mut R, space: &Space, bound: i64) -> CellSet {
    let u = open(rng, space, bound, true);
    match space {
        Space::Poset(_) => u.cells().complement(),
        Space::Line => {
            let window =
                CellSet::line((vertex(-bound)..=vertex(bound)).collect(), false, false).closure();
            window.difference(u.cells()).unwrap()
        }
    }
}

/// A random locally closed set with bounded cells on the line.
pub fn locally_closed<R: Rng>(rng: &mut R, space: &Space, bound: i64) -> LocallyClosedSet {
    let u = open(rng, space, bound, !space.is_line());
    let z = closed(rng, space, bound);
    LocallyClosedSet::new(u, z).expect("closed by construction")
}

/// A random sheaf. On the line its support stays within the window
/// `[vertex(-bound), vertex(bound)]` unless `bounded` is false, in which
/// case constant tails may appear.
pub fn sheaf<R: Rng>(rng: &mut R, space: &Space, field: Field, bound: i64, bounded: bool) -> Sheaf {
    let mut pieces = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let piece = if !bounded && space.is_line() && rng.gen_bool(0.3) {
            let u = open(rng, space, bound, false);
            Sheaf::constant_on_open(&u, field)
        } else {
            Sheaf::constant_on(&locally_closed(rng, space, bound), field, 1)
        };
        pieces.push(piece);
    }
    let b = direct_sum_all(space, field, &pieces);
    let stars: Vec<Sheaf> = (0..rng.gen_range(0..=2))
        .map(|_| Sheaf::constant_on_open(&space.star(cell(rng, space, bound)), field))
        .collect();
    let a = direct_sum_all(space, field, &stars);
    let phi = morphism(rng, &a, &b);
    phi.cokernel().expect("cokernels exist").object
}

pub fn direct_sum_all(space: &Space, field: Field, parts: &[Sheaf]) -> Sheaf {
    parts.iter().fold(Sheaf::zero(space, field), |acc, s| {
        acc.direct_sum(s).unwrap()
    })
}

/// A random cell, within `[vertex(-bound), vertex(bound)]` on the line.
pub fn cell<R: Rng>(rng: &mut R, space: &Space, bound: i64) -> Cell {
    match space {
        Space::Poset(p) => rng.gen_range(0..p.size() as Cell),
        Space::Line => rng.gen_range(vertex(-bound)..=vertex(bound)),
    }
}

/// A random element of `Hom(a, b)` with small integer coordinates.
pub fn morphism<R: Rng>(rng: &mut R, a: &Sheaf, b: &Sheaf) -> SheafMorphism {
    let hom = a.hom_space(b).expect("same space");
    let coords: Vec<Scalar> = (0..hom.dim()).map(|_| scalar(rng, a.field())).collect();
    hom.element(&coords)
}

/// A random monotone map between finite posets, or `None` after a few
/// failed attempts.
pub fn monotone_map<R: Rng>(rng: &mut R, source: &Space, target: &Space) -> Option<CellMap> {
    let (p, q) = (source.as_poset()?, target.as_poset()?);
    'attempt: for _ in 0..50 {
        let mut table: Vec<Cell> = Vec::with_capacity(p.size());
        for j in 0..p.size() {
            let mut options: Vec<usize> = (0..q.size())
                .filter(|&y| (0..j).all(|i| !p.leq(i, j) || q.leq(table[i] as usize, y)))
                .collect();
            options.shuffle(rng);
            match options.first() {
                Some(&y) => table.push(y as Cell),
                None => continue 'attempt,
            }
        }
        return CellMap::new(source.clone(), target.clone(), MapKind::Table(table)).ok();
    }
    None
}

/// A bounded interval `(a, b)` of the line with `-bound <= a < b <= bound`.
pub fn interval<R: Rng>(rng: &mut R, bound: i64) -> OpenSet {
    let a = rng.gen_range(-bound..bound);
    let b = rng.gen_range(a + 1..=bound);
    OpenSet::interval(a, b)
}

/// A random endomorphism with many zero coordinates, so that singular
/// and nilpotent parts are common.
pub fn sparse_endomorphism<R: Rng>(rng: &mut R, f: &Sheaf) -> SheafMorphism {
    let hom = f.hom_space(f).expect("same space");
    let coords: Vec<Scalar> = (0..hom.dim())
        .map(|_| {
            if rng.gen_bool(0.5) {
                f.field().zero()
            } else {
                scalar(rng, f.field())
            }
        })
        .collect();
    hom.element(&coords)
}

/// The stationary system on `A ⊕ B` whose transitions are the idempotent
/// `(a, b) ↦ (a + h b, 0)` for a random `h: B -> A`. Its colimit is `A`,
/// reached through a map that is not a projection onto a summand of the
/// levels' chosen splitting.
pub fn stationary_system<R: Rng>(rng: &mut R, a: &Sheaf, b: &Sheaf) -> SeqSystem {
    let (sum, [ia, _, pa, pb]) = biproduct(a, b).expect("same space");
    let h = morphism(rng, b, a);
    let t = ia
        .compose(&pa.add(&h.compose(&pb).unwrap()).unwrap())
        .unwrap();
    SeqSystem::generate(
        PeriodCert::stationary(0),
        |_| Ok(sum.clone()),
        |_| Ok(t.clone()),
    )
    .expect("constant data")
}
