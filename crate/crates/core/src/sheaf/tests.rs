use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::random;
use crate::space::{edge, vertex, CellMap, CellSet, FinitePoset, MapKind};

const Q: Field = Field::Rationals;

fn line_cells() -> Vec<Cell> {
    (-24..=24).collect()
}

fn cells_of(space: &Space) -> Vec<Cell> {
    match space {
        Space::Poset(p) => (0..p.size() as Cell).collect(),
        Space::Line => line_cells(),
    }
}

/// `a -> b -> c` is exact at `b` on every cell checked.
fn exact_at(f: &SheafMorphism, g: &SheafMorphism) -> bool {
    g.compose(f).unwrap().is_zero()
        && cells_of(f.source().space()).iter().all(|&c| {
            let gc = g.component(c);
            gc.domain_dim() - gc.rank() == f.component(c).rank()
        })
}

/// Counts sections over `cells` by enumerating all assignments over F_2.
fn brute_force_sections_f2(f: &Sheaf, cells: &[Cell]) -> Option<usize> {
    let dims: Vec<usize> = cells.iter().map(|&c| f.dim(c)).collect();
    let total: usize = dims.iter().sum();
    if total > 14 {
        return None;
    }
    let field = f.field();
    let mut count = 0usize;
    for mask in 0u32..(1 << total) {
        let mut offset = 0;
        let values: Vec<Vec<Scalar>> = dims
            .iter()
            .map(|&d| {
                let v = (0..d)
                    .map(|i| field.from_i64(((mask >> (offset + i)) & 1) as i64))
                    .collect();
                offset += d;
                v
            })
            .collect();
        let ok = cells.iter().enumerate().all(|(i, &c)| {
            cells.iter().enumerate().all(|(j, &d)| {
                i == j || !f.space().leq(c, d) || f.map_between(c, d).apply(&values[i]) == values[j]
            })
        });
        if ok {
            count += 1;
        }
    }
    Some(count.trailing_zeros() as usize)
}

fn three_cell_poset() -> Space {
    Space::poset(FinitePoset::new(3, &[(0, 1), (0, 2)]).unwrap())
}

#[test]
fn constant_sheaf_on_three_cells() {
    let k = Sheaf::constant(&three_cell_poset(), Q, 1);
    for c in 0..3 {
        assert_eq!(k.dim(c), 1);
    }
    assert!(k.gen(0, 1).is_identity());
    assert!(k.gen(0, 2).is_identity());
}

#[test]
fn closed_ray_stalks() {
    let g = Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(2), Q, 1);
    assert_eq!(g.dim(vertex(2)), 1);
    assert_eq!(g.dim(edge(2)), 1);
    assert_eq!(g.dim(vertex(7)), 1);
    assert_eq!(g.dim(edge(1)), 0);
    assert_eq!(g.dim(vertex(1)), 0);
    assert_eq!(g.tails(), (0, 1));
}

#[test]
fn closed_point_has_zero_generization() {
    let p = Sheaf::constant_on(&LocallyClosedSet::closed_interval(1, 1), Q, 1);
    assert_eq!(p.dim(vertex(1)), 1);
    assert_eq!(p.dim(edge(1)), 0);
    assert_eq!(p.dim(edge(0)), 0);
    assert_eq!(p.support().unwrap(), vec![vertex(1)]);
}

#[test]
fn hom_between_disjoint_supports_vanishes() {
    let u = OpenSet::interval(0, 2);
    let pt = Sheaf::constant_on(&LocallyClosedSet::closed_interval(4, 4), Q, 1);
    assert_eq!(
        Sheaf::constant_on_open(&u, Q).hom_space(&pt).unwrap().dim(),
        0
    );
}

#[test]
fn hom_constant_to_closed_ray_is_one_dimensional() {
    let k = Sheaf::constant(&Space::Line, Q, 1);
    for n in [-3, 0, 5] {
        let g = Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(n), Q, 1);
        assert_eq!(k.hom_space(&g).unwrap().dim(), 1);
    }
}

#[test]
fn tensor_of_indicators_is_indicator_of_intersection() {
    let u = OpenSet::interval(-2, 3);
    let v = OpenSet::right_ray(1);
    let t = Sheaf::constant_on_open(&u, Q)
        .tensor(&Sheaf::constant_on_open(&v, Q))
        .unwrap();
    assert!(t.same_as(&Sheaf::constant_on_open(&u.intersection(&v).unwrap(), Q)));
}

#[test]
fn images_along_identity_are_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let space = Space::poset(random::poset(&mut rng, 4));
    let f = random::sheaf(&mut rng, &space, Q, 2, true);
    let id = CellMap::identity(&space);
    assert!(inverse_image(&id, &f).unwrap().same_as(&f));
    assert_eq!(direct_image(&id, &f).unwrap().dim(0), f.dim(0));
    let d = direct_image(&id, &f).unwrap();
    let p = proper_direct_image(&id, &f).unwrap();
    for c in cells_of(&space) {
        assert_eq!(d.dim(c), f.dim(c));
        assert_eq!(p.dim(c), f.dim(c));
    }
}

#[test]
fn line_to_point_images_of_closed_ray() {
    let pt = Space::point();
    let f = CellMap::new(Space::Line, pt.clone(), MapKind::LineConstant(0)).unwrap();
    let g = Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(0), Q, 1);
    assert_eq!(direct_image(&f, &g).unwrap().dim(0), 1);
    assert_eq!(proper_direct_image(&f, &g).unwrap().dim(0), 0);
    let bounded = Sheaf::constant_on(&LocallyClosedSet::closed_interval(0, 2), Q, 1);
    assert_eq!(proper_direct_image(&f, &bounded).unwrap().dim(0), 1);
}

#[test]
fn kernel_and_cokernel_examples() {
    let k = Sheaf::constant(&Space::Line, Q, 1);
    assert!(SheafMorphism::identity(&k)
        .kernel()
        .unwrap()
        .object
        .is_zero());

    let u = OpenSet::interval(-1, 2);
    let incl = k.open_inclusion(&u).unwrap();
    let coker = incl.cokernel().unwrap().object;
    let complement = LocallyClosedSet::from_closed(u.cells().complement()).unwrap();
    assert!(coker.same_as(&Sheaf::constant_on(&complement, Q, 1)));

    let point = CellSet::from_cells(&Space::Line, [vertex(1)]).unwrap();
    let proj = k.closed_projection(&point).unwrap();
    let ker = proj.kernel().unwrap().object;
    let rest = OpenSet::new(point.complement()).unwrap();
    assert!(ker.same_as(&Sheaf::constant_on_open(&rest, Q)));
}

#[test]
fn presentation_of_indicator_is_trivial() {
    let u = OpenSet::interval(0, 3)
        .union(&OpenSet::right_ray(5))
        .unwrap();
    let p = Presentation::of(&Sheaf::constant_on_open(&u, Q)).unwrap();
    assert_eq!(p.generators(), &[(u, 1)]);
    assert!(p.relations().is_empty());
    assert!(p.is_exact());
}

#[test]
fn presentation_of_closed_point() {
    let f = Sheaf::constant_on(&LocallyClosedSet::closed_interval(1, 1), Q, 1);
    let p = Presentation::of(&f).unwrap();
    assert_eq!(p.generators(), &[(Space::Line.star(vertex(1)), 1)]);
    let rel: Vec<OpenSet> = p.relation_opens();
    assert_eq!(
        rel,
        vec![Space::Line.star(edge(0)), Space::Line.star(edge(1))]
    );
    assert!(p.is_exact());
}

#[test]
fn presentation_refuses_unbounded_support() {
    let g = Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(0), Q, 1);
    assert!(matches!(
        Presentation::of(&g),
        Err(Error::UnboundedSupport(_))
    ));
}

fn arb_space() -> impl Strategy<Value = (u64, bool)> {
    (any::<u64>(), any::<bool>())
}

fn space_for(rng: &mut ChaCha8Rng, line: bool) -> Space {
    if line {
        Space::Line
    } else {
        Space::poset(random::poset(rng, 5))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hom_from_indicator_counts_sections((seed, line) in arb_space()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = Field::Prime(2);
        let space = space_for(&mut rng, line);
        let f = random::sheaf(&mut rng, &space, field, 2, true);
        let u = random::open(&mut rng, &space, 3, true);
        let cells: Vec<Cell> = cells_of(&space).into_iter().filter(|&c| u.contains(c)).collect();
        let Some(expected) = brute_force_sections_f2(&f, &cells) else { return Ok(()) };
        prop_assert_eq!(f.sections(&u).unwrap().dim(), expected);
        prop_assert_eq!(Sheaf::constant_on_open(&u, field).hom_space(&f).unwrap().dim(), expected);
    }

    #[test]
    fn hom_of_constant_on_connected_poset_is_scalar(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Space::poset(random::connected_poset(&mut rng, 6));
        let k = Sheaf::constant(&space, Q, 1);
        prop_assert_eq!(k.hom_space(&k).unwrap().dim(), 1);
        let pt = Space::point();
        let f = CellMap::constant(&space, &pt, 0).unwrap();
        prop_assert_eq!(direct_image(&f, &k).unwrap().dim(0), 1);
    }

    #[test]
    fn tensor_unit_and_hom_sheaf_of_indicator((seed, line) in arb_space()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = space_for(&mut rng, line);
        let g = random::sheaf(&mut rng, &space, Q, 2, false);
        prop_assert!(g.tensor(&Sheaf::constant(&space, Q, 1)).unwrap().same_as(&g));
        let u = random::open(&mut rng, &space, 2, false);
        let w = random::open(&mut rng, &space, 2, true);
        let h = Sheaf::constant_on_open(&u, Q).hom_sheaf(&g).unwrap();
        prop_assert_eq!(h.sections(&w).unwrap().dim(), g.sections(&w.intersection(&u).unwrap()).unwrap().dim());
    }

    #[test]
    fn tensor_right_exact_and_hom_left_exact((seed, line) in arb_space()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = space_for(&mut rng, line);
        let b = random::sheaf(&mut rng, &space, Q, 2, true);
        let x = random::sheaf(&mut rng, &space, Q, 2, true);
        let phi = random::morphism(&mut rng, &x, &b);
        let a = phi.image().unwrap().inclusion;
        let c = a.cokernel().unwrap().projection;
        let g = random::sheaf(&mut rng, &space, Q, 2, true);
        let (ta, tc) = (a.tensor(&SheafMorphism::identity(&g)).unwrap(), c.tensor(&SheafMorphism::identity(&g)).unwrap());
        prop_assert!(exact_at(&ta, &tc));
        prop_assert!(tc.is_epi());
        let (ha, hc) = (a.hom_sheaf_post(&g).unwrap(), c.hom_sheaf_post(&g).unwrap());
        prop_assert!(ha.is_mono());
        prop_assert!(exact_at(&ha, &hc));
    }

    #[test]
    fn inverse_image_direct_image_adjunction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Space::poset(random::poset(&mut rng, 4));
        let y = Space::poset(random::poset(&mut rng, 4));
        let Some(f) = random::monotone_map(&mut rng, &x, &y) else { return Ok(()) };
        let g = random::sheaf(&mut rng, &y, Q, 2, true);
        let s = random::sheaf(&mut rng, &x, Q, 2, true);
        let left = inverse_image(&f, &g).unwrap().hom_space(&s).unwrap().dim();
        let right = g.hom_space(&direct_image(&f, &s).unwrap()).unwrap().dim();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_image_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Space::poset(random::poset(&mut rng, 4));
        let y = Space::poset(random::poset(&mut rng, 4));
        let Some(f) = random::monotone_map(&mut rng, &x, &y) else { return Ok(()) };
        let b = random::sheaf(&mut rng, &y, Q, 2, true);
        let a = random::sheaf(&mut rng, &y, Q, 2, true);
        let phi = random::morphism(&mut rng, &a, &b);
        let k = phi.kernel().unwrap().inclusion;
        let pk = inverse_image_morphism(&f, &k).unwrap();
        let pphi = inverse_image_morphism(&f, &phi).unwrap();
        prop_assert!(pk.is_mono());
        prop_assert!(exact_at(&pk, &pphi));
    }

    #[test]
    fn proper_image_embeds_in_direct_image((seed, line) in arb_space()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, f) = if line {
            let pt = Space::point();
            (Space::Line, CellMap::new(Space::Line, pt, MapKind::LineConstant(0)).unwrap())
        } else {
            let x = Space::poset(random::poset(&mut rng, 4));
            let y = Space::poset(random::poset(&mut rng, 4));
            match random::monotone_map(&mut rng, &x, &y) {
                Some(f) => (x, f),
                None => return Ok(()),
            }
        };
        let s = random::sheaf(&mut rng, &x, Q, 2, false);
        prop_assert!(proper_inclusion(&f, &s).unwrap().is_mono());
    }

    #[test]
    fn presentations_are_exact((seed, line) in arb_space(), full in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = space_for(&mut rng, line);
        let f = random::sheaf(&mut rng, &space, Q, 2, true);
        let style = if full { PresentationStyle::Full } else { PresentationStyle::Minimal };
        let p = Presentation::with_style(&f, style).unwrap();
        prop_assert!(p.is_exact());
        prop_assert!(p.target().same_as(&f));
    }
}
