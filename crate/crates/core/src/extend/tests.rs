use super::*;
use crate::error::Error;
use crate::indcat::{iota, receding_rays};
use crate::linalg::{Field, LinearMap};
use crate::random;
use crate::sheaf::{Presentation, PresentationStyle, Sheaf, SheafMorphism};
use crate::space::{vertex, CellSet, LocallyClosedSet, OpenSet, Space};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rationals;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn space<R: Rng>(rng: &mut R) -> Space {
    if rng.gen_bool(0.5) {
        Space::Line
    } else {
        Space::poset(random::poset(rng, 5))
    }
}

fn pairs<R: Rng>(rng: &mut R, space: &Space, n: usize) -> Vec<(OpenSet, OpenSet)> {
    (0..n)
        .map(|_| {
            (
                random::open(rng, space, 3, true),
                random::open(rng, space, 3, true),
            )
        })
        .collect()
}

/// `⊕_c k_{closure(c)}` over every cell near the window: its sections over
/// `U` are one coordinate per cell of `U`.
fn cell_function_sheaf(space: &Space, bound: i64) -> Sheaf {
    let cells: Vec<i64> = match space {
        Space::Poset(p) => (0..p.size() as i64).collect(),
        Space::Line => (vertex(-bound)..=vertex(bound)).collect(),
    };
    let parts: Vec<Sheaf> = cells
        .iter()
        .map(|&c| {
            Sheaf::constant_on(
                &LocallyClosedSet::from_closed(space.cell_closure(c)).unwrap(),
                Q,
                1,
            )
        })
        .collect();
    random::direct_sum_all(space, Q, &parts)
}

mod mayer_vietoris {
    use super::*;

    #[test]
    fn cell_functions_pass() {
        let mut r = rng(1);
        for _ in 0..10 {
            let s = space(&mut r);
            let report =
                check_mv(&PresheafOnT::cell_functions(&s, Q), &pairs(&mut r, &s, 5)).unwrap();
            assert!(report.passed(), "{report}");
            for l in &report.lines {
                // indicator bookkeeping: |U ∪ V| + |U ∩ V| = |U| + |V|
                assert_eq!(l.union_dim + l.intersection_dim, l.sum_dim);
            }
        }
    }

    #[test]
    fn constant_presheaf_fails_on_disjoint_opens() {
        let s = Space::Line;
        let (u, v) = (OpenSet::interval(-3, -1), OpenSet::interval(1, 3));
        let report = check_mv(
            &PresheafOnT::constant_on_nonempty(&s, Q),
            &[(u.clone(), v.clone())],
        )
        .unwrap();
        let bad = report.first_violation().unwrap();
        assert!(bad.injective && !bad.exact_in_middle);
        assert_eq!(
            (bad.union_dim, bad.sum_dim, bad.intersection_dim),
            (1, 2, 0)
        );
        // overlapping opens are fine
        let ok = check_mv(
            &PresheafOnT::constant_on_nonempty(&s, Q),
            &[(OpenSet::interval(0, 2), OpenSet::interval(1, 3))],
        )
        .unwrap();
        assert!(ok.passed());
    }

    #[test]
    fn sheaf_sections_pass() {
        let mut r = rng(2);
        for _ in 0..10 {
            let s = space(&mut r);
            let g = random::sheaf(&mut r, &s, Q, 3, true);
            let report = check_mv(&PresheafOnT::sections(&g), &pairs(&mut r, &s, 5)).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn nonzero_on_the_empty_set_fails() {
        let s = Space::point();
        let empty = OpenSet::empty(&s);
        let table = Table::new(vec![(empty, 1), (OpenSet::whole(&s), 1)], vec![]).unwrap();
        let report = check_mv(&PresheafOnT::table(&s, Q, table), &[]).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn unbounded_opens_are_refused() {
        let f = PresheafOnT::cell_functions(&Space::Line, Q);
        assert!(matches!(
            f.dim(&OpenSet::right_ray(0)),
            Err(Error::Refused(_))
        ));
    }
}

mod evaluation {
    use super::*;

    #[test]
    fn constant_sheaves_give_values() {
        let mut r = rng(3);
        for _ in 0..20 {
            let s = space(&mut r);
            let u = random::open(&mut r, &s, 3, true);
            let f = PresheafOnT::cell_functions(&s, Q);
            let e = extend(&f)
                .evaluate(&Sheaf::constant_on_open(&u, Q))
                .unwrap();
            assert_eq!(e.dim(), u.cells().cardinality().unwrap());
        }
    }

    #[test]
    fn zero_sheaf_gives_zero() {
        let f = extend(&PresheafOnT::cell_functions(&Space::Line, Q));
        assert_eq!(f.evaluate(&Sheaf::zero(&Space::Line, Q)).unwrap().dim(), 0);
    }

    #[test]
    fn single_edge_on_the_line() {
        let u = OpenSet::new(CellSet::from_cells(&Space::Line, [1]).unwrap()).unwrap();
        let f = extend(&PresheafOnT::cell_functions(&Space::Line, Q));
        assert_eq!(
            f.evaluate(&Sheaf::constant_on_open(&u, Q)).unwrap().dim(),
            1
        );
        let by_stars =
            Presentation::by_stars(&Sheaf::constant_on_open(&u, Q), PresentationStyle::Full)
                .unwrap();
        assert_eq!(f.evaluate_presented(&by_stars).unwrap().dim(), 1);
    }

    #[test]
    fn cell_functions_match_a_sheaf_oracle() {
        let mut r = rng(4);
        for _ in 0..15 {
            let s = space(&mut r);
            let g = random::sheaf(&mut r, &s, Q, 2, true);
            let oracle = g.hom_space(&cell_function_sheaf(&s, 4)).unwrap().dim();
            let f = extend(&PresheafOnT::cell_functions(&s, Q));
            assert_eq!(f.evaluate(&g).unwrap().dim(), oracle);
        }
    }

    #[test]
    fn sections_agree_with_hom_space() {
        let mut r = rng(5);
        for _ in 0..15 {
            let s = space(&mut r);
            let target = random::sheaf(&mut r, &s, Q, 3, true);
            let g = random::sheaf(&mut r, &s, Q, 3, true);
            let f = extend(&PresheafOnT::sections(&target));
            assert_eq!(
                f.evaluate(&g).unwrap().dim(),
                g.hom_space(&target).unwrap().dim()
            );
        }
    }

    #[test]
    fn presentations_agree() {
        let mut r = rng(6);
        for _ in 0..15 {
            let s = space(&mut r);
            let g = random::sheaf(&mut r, &s, Q, 3, true);
            let f = extend(&PresheafOnT::bounded_cell_functions(&s, Q, 3));
            let a = f.evaluate_with(&g, PresentationStyle::Minimal).unwrap();
            let b = f.evaluate_with(&g, PresentationStyle::Full).unwrap();
            let c = f
                .evaluate_presented(&Presentation::by_stars(&g, PresentationStyle::Full).unwrap())
                .unwrap();
            assert_eq!(a.dim(), b.dim());
            assert_eq!(a.dim(), c.dim());
        }
    }

    #[test]
    fn violations_name_the_pair() {
        let s = Space::Line;
        let two = Sheaf::constant_on_open(&OpenSet::interval(-3, -1), Q)
            .direct_sum(&Sheaf::constant_on_open(&OpenSet::interval(1, 3), Q))
            .unwrap();
        let f = extend(&PresheafOnT::constant_on_nonempty(&s, Q));
        match f.evaluate(&two) {
            Err(Error::MayerVietoris(msg)) => assert!(msg.starts_with("pair U{")),
            other => panic!("expected a violation, got {other:?}"),
        }
        assert!(f.checked_pairs() > 0);
    }

    #[test]
    fn tables_evaluate_like_their_values() {
        let s = Space::poset(crate::space::FinitePoset::chain(2));
        let (top, whole) = (s.star(1), OpenSet::whole(&s));
        let m = LinearMap::from_rows(Q, 2, &[vec![1, 0]]).unwrap();
        let table = Table::new(
            vec![(whole.clone(), 2), (top.clone(), 1)],
            vec![(whole.clone(), top.clone(), m)],
        )
        .unwrap();
        let f = extend(&PresheafOnT::table(&s, Q, table));
        assert_eq!(
            f.evaluate(&Sheaf::constant_on_open(&whole, Q))
                .unwrap()
                .dim(),
            2
        );
        assert_eq!(
            f.evaluate(&Sheaf::constant_on_open(&top, Q)).unwrap().dim(),
            1
        );
    }
}

mod functoriality {
    use super::*;

    fn random_pair<R: Rng>(r: &mut R, s: &Space) -> (Sheaf, Sheaf) {
        (
            random::sheaf(r, s, Q, 2, true),
            random::sheaf(r, s, Q, 2, true),
        )
    }

    #[test]
    fn identities_and_composites() {
        let mut r = rng(7);
        for _ in 0..10 {
            let s = space(&mut r);
            let f = extend(&PresheafOnT::cell_functions(&s, Q));
            let (a, b) = random_pair(&mut r, &s);
            let c = random::sheaf(&mut r, &s, Q, 2, true);
            let id = f.evaluate_morphism(&SheafMorphism::identity(&a)).unwrap();
            assert!(id.map.is_identity());
            let phi = random::morphism(&mut r, &a, &b);
            let psi = random::morphism(&mut r, &b, &c);
            let whole = f
                .evaluate_morphism(&psi.compose(&phi).unwrap())
                .unwrap()
                .map;
            let first = f.evaluate_morphism(&phi).unwrap().map;
            let second = f.evaluate_morphism(&psi).unwrap().map;
            assert_eq!(whole, first.compose(&second).unwrap());
        }
    }

    #[test]
    fn left_exact_on_short_exact_sequences() {
        let mut r = rng(8);
        for _ in 0..10 {
            let s = space(&mut r);
            let f = extend(&PresheafOnT::sections(&random::sheaf(
                &mut r, &s, Q, 2, true,
            )));
            let (a, b) = random_pair(&mut r, &s);
            let phi = random::morphism(&mut r, &a, &b);
            // 0 -> ker φ -> A -> im φ -> 0
            let ker = phi.kernel().unwrap();
            let im = phi.image().unwrap();
            let onto = f.evaluate_morphism(&im.coimage_map).unwrap().map;
            let into = f.evaluate_morphism(&ker.inclusion).unwrap().map;
            assert!(onto.is_injective());
            assert!(into.compose(&onto).unwrap().is_zero());
            assert_eq!(onto.rank(), into.kernel().dim());
        }
    }
}

mod rho {
    use super::*;

    #[test]
    fn iota_of_a_sheaf_evaluates_like_sections() {
        let mut r = rng(9);
        for _ in 0..8 {
            let s = space(&mut r);
            let target = random::sheaf(&mut r, &s, Q, 2, true);
            let g = random::sheaf(&mut r, &s, Q, 2, true);
            let x = iota(&target).unwrap();
            let a = rho_view(&x).evaluate(&g).unwrap().dim();
            let b = extend(&PresheafOnT::sections(&target))
                .evaluate(&g)
                .unwrap()
                .dim();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn receding_rays_vanish_on_bounded_probes() {
        let mut r = rng(10);
        let f = rho_view(&receding_rays(Q).unwrap());
        for _ in 0..5 {
            let u = random::nonempty_bounded_open(&mut r, &Space::Line, 4);
            assert_eq!(
                f.evaluate(&Sheaf::constant_on_open(&u, Q)).unwrap().dim(),
                0
            );
        }
    }

    #[test]
    fn whole_line_probe_is_refused() {
        let f = rho_view(&receding_rays(Q).unwrap());
        let k_x = Sheaf::constant(&Space::Line, Q, 1);
        assert!(matches!(f.evaluate(&k_x), Err(Error::Refused(_))));
    }
}
