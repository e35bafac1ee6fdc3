use super::*;
use crate::indcat::{
    beta_open, hom_from_sheaf, hom_ind, iota, iota_morphism, is_exact, is_ind_zero, is_iso,
    receding_rays, Dim, SeqSystem,
};
use crate::linalg::Field;
use crate::random;
use crate::sheaf::Sheaf;
use crate::space::{CellMap, FinitePoset, LocallyClosedSet, OpenSet, Space};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rationals;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn probe(x: &SeqSystem, u: &OpenSet) -> Dim {
    hom_from_sheaf(&Sheaf::constant_on_open(u, x.field()), x)
        .unwrap()
        .dim()
}

/// Bounded intervals and random bounded opens of the line, or every open
/// of a poset.
fn probes<R: Rng>(rng: &mut R, space: &Space) -> Vec<OpenSet> {
    match space {
        Space::Line => {
            let mut out: Vec<OpenSet> = (0..6).map(|_| random::interval(rng, 5)).collect();
            out.extend((0..4).map(|_| random::open(rng, space, 5, true)));
            out
        }
        _ => probe_opens(space).unwrap(),
    }
}

fn assert_probes_agree<R: Rng>(rng: &mut R, a: &SeqSystem, b: &SeqSystem) {
    for u in probes(rng, a.space()) {
        assert_eq!(probe(a, &u), probe(b, &u), "probe {u}");
    }
}

fn small_poset<R: Rng>(rng: &mut R, n: usize) -> Space {
    Space::poset(random::poset(rng, n))
}

/// Number of connected components of the cells of `u`, by union-find.
fn components(space: &Space, u: &OpenSet) -> usize {
    let cells: Vec<i64> = match space {
        Space::Poset(p) => (0..p.size() as i64).filter(|&c| u.contains(c)).collect(),
        Space::Line => (-40..=40).filter(|&c| u.contains(c)).collect(),
    };
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if space.leq(cells[i], cells[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..cells.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

mod tensor {
    use super::*;

    #[test]
    fn unit_on_compact_levels() {
        let mut r = rng(11);
        let unit = iota(&Sheaf::constant(&Space::Line, Q, 1)).unwrap();
        for _ in 0..4 {
            let x = iota(&random::sheaf(&mut r, &Space::Line, Q, 3, true)).unwrap();
            assert_probes_agree(&mut r, &tensor_ind(&x, &unit).unwrap(), &x);
            let u = random::open(&mut r, &Space::Line, 4, false);
            let x = beta_open(&u, Q).unwrap();
            assert_probes_agree(&mut r, &tensor_ind(&x, &unit).unwrap(), &x);
        }
        let p = small_poset(&mut r, 5);
        let (a, b) = (
            random::sheaf(&mut r, &p, Q, 0, true),
            random::sheaf(&mut r, &p, Q, 0, true),
        );
        let x = random::stationary_system(&mut r, &a, &b);
        let unit = iota(&Sheaf::constant(&p, Q, 1)).unwrap();
        assert_probes_agree(&mut r, &tensor_ind(&x, &unit).unwrap(), &x);
    }

    #[test]
    fn iota_commutes_with_tensor() {
        let mut r = rng(12);
        for _ in 0..4 {
            let f = random::sheaf(&mut r, &Space::Line, Q, 3, false);
            let g = random::sheaf(&mut r, &Space::Line, Q, 3, false);
            let lhs = tensor_ind(&iota(&f).unwrap(), &iota(&g).unwrap()).unwrap();
            assert_probes_agree(&mut r, &lhs, &iota(&f.tensor(&g).unwrap()).unwrap());
        }
    }

    #[test]
    fn tilde_opens_intersect() {
        let mut r = rng(13);
        for _ in 0..5 {
            let u = random::open(&mut r, &Space::Line, 4, false);
            let v = random::open(&mut r, &Space::Line, 4, false);
            let lhs = tensor_ind(&beta_open(&u, Q).unwrap(), &beta_open(&v, Q).unwrap()).unwrap();
            let rhs = beta_open(&u.intersection(&v).unwrap(), Q).unwrap();
            assert_probes_agree(&mut r, &lhs, &rhs);
        }
    }

    #[test]
    fn growth_times_bounded_keeps_growing() {
        let x = crate::indcat::free_growth(Q).unwrap();
        let k2 = iota(&Sheaf::constant(&Space::point(), Q, 2)).unwrap();
        let t = tensor_ind(&k2, &x).unwrap();
        assert_eq!(t.level(3).dim(0), 6);
        assert_eq!(probe(&t, &OpenSet::whole(&Space::point())), Dim::Infinite);
        assert!(tensor_ind(&x, &x).is_err());
    }
}

mod ihom {
    use super::*;

    #[test]
    fn unit_in_first_argument() {
        let mut r = rng(21);
        let unit = iota(&Sheaf::constant(&Space::Line, Q, 1)).unwrap();
        for _ in 0..3 {
            let y = iota(&random::sheaf(&mut r, &Space::Line, Q, 3, false)).unwrap();
            assert_probes_agree(&mut r, &ihom_ind(&unit, &y).unwrap(), &y);
        }
        let g = receding_rays(Q).unwrap();
        assert_probes_agree(&mut r, &ihom_ind(&unit, &g).unwrap(), &g);
    }

    #[test]
    fn alpha_of_ihom_is_hom_sheaf() {
        let mut r = rng(22);
        for _ in 0..6 {
            let p = small_poset(&mut r, 5);
            let (f, g) = (
                random::sheaf(&mut r, &p, Q, 0, true),
                random::sheaf(&mut r, &p, Q, 0, true),
            );
            let a =
                crate::indcat::alpha(&ihom_ind(&iota(&f).unwrap(), &iota(&g).unwrap()).unwrap())
                    .unwrap();
            let h = f.hom_sheaf(&g).unwrap();
            for u in probe_opens(&p).unwrap() {
                assert_eq!(a.sections(&u).unwrap().dim(), h.sections(&u).unwrap().dim());
            }
        }
    }

    #[test]
    fn refuses_other_first_arguments() {
        let g = receding_rays(Q).unwrap();
        assert!(ihom_ind(&g, &g).is_err());
    }

    #[test]
    fn adjunction_dimensions() {
        let mut r = rng(23);
        for _ in 0..10 {
            let p = small_poset(&mut r, 4);
            let s = |r: &mut ChaCha8Rng| random::sheaf(r, &p, Q, 0, true);
            let (a, b, c, d) = (s(&mut r), s(&mut r), s(&mut r), s(&mut r));
            let x = random::stationary_system(&mut r, &a, &b);
            let y = random::stationary_system(&mut r, &c, &d);
            let k = iota(&s(&mut r)).unwrap();
            let lhs = hom_ind(&tensor_ind(&x, &k).unwrap(), &y).unwrap();
            let rhs = hom_ind(&x, &ihom_ind(&k, &y).unwrap()).unwrap();
            assert_eq!(lhs.dim(), rhs.dim());
        }
    }
}

mod restriction {
    use super::*;

    #[test]
    fn receding_rays_vanish_on_bounded_opens() {
        let mut r = rng(31);
        let g = receding_rays(Q).unwrap();
        for _ in 0..5 {
            let u = random::nonempty_bounded_open(&mut r, &Space::Line, 5);
            assert!(is_ind_zero(&restrict(&g, &u).unwrap()).unwrap().holds);
        }
        // the whole line is exhausted by relatively compact opens as well,
        // yet G is not zero: Hom(k_X, G) = k
        let whole = OpenSet::whole(&Space::Line);
        assert!(is_ind_zero(&restrict(&g, &whole).unwrap()).unwrap().holds);
        assert_eq!(probe(&g, &whole), Dim::Finite(1));
    }

    #[test]
    fn iota_restricted_has_sections_of_the_sheaf() {
        let mut r = rng(32);
        for _ in 0..4 {
            let f = random::sheaf(&mut r, &Space::Line, Q, 3, false);
            let u = random::open(&mut r, &Space::Line, 4, false);
            let x = restrict(&iota(&f).unwrap(), &u).unwrap();
            for m in [2, 4, 6] {
                let w = u.rc_exhaustion(m);
                assert_eq!(
                    probe(&x, &w),
                    Dim::Finite(f.sections(&w).unwrap().dim()),
                    "on {w}"
                );
            }
        }
    }

    #[test]
    fn hom_presheaf_glues_on_posets() {
        let mut r = rng(33);
        for _ in 0..6 {
            let p = small_poset(&mut r, 5);
            let s = |r: &mut ChaCha8Rng| random::sheaf(r, &p, Q, 0, true);
            let (a, b) = (s(&mut r), s(&mut r));
            let x = random::stationary_system(&mut r, &a, &b);
            let y = iota(&s(&mut r)).unwrap();
            let opens = probe_opens(&p).unwrap();
            let cover: Vec<OpenSet> = (0..r.gen_range(2..=3))
                .map(|_| opens[r.gen_range(0..opens.len())].clone())
                .collect();
            let g = hom_presheaf(&x, &y).check_glueing(&cover).unwrap();
            assert!(g.verdict.holds, "{g}");
        }
    }

    #[test]
    fn restriction_maps_compose() {
        let mut r = rng(34);
        let p = Space::poset(FinitePoset::chain(3));
        let f = random::sheaf(&mut r, &p, Q, 0, true);
        let hp = hom_presheaf(&iota(&f).unwrap(), &iota(&f).unwrap());
        let opens = probe_opens(&p).unwrap();
        let of_size = |n: usize| {
            opens
                .iter()
                .find(|o| o.cells().cardinality() == Some(n))
                .unwrap()
        };
        let (u, v, w) = (of_size(3), of_size(2), of_size(1));
        assert!(w.is_subset(v) && v.is_subset(u));
        let direct = hp.restriction(u, w).unwrap();
        let steps = hp
            .restriction(v, w)
            .unwrap()
            .compose(&hp.restriction(u, v).unwrap())
            .unwrap();
        assert_eq!(direct, steps);
    }
}

mod images {
    use super::*;

    #[test]
    fn identity_maps_act_trivially() {
        let mut r = rng(41);
        let p = small_poset(&mut r, 5);
        let id = CellMap::identity(&p);
        let (a, b) = (
            random::sheaf(&mut r, &p, Q, 0, true),
            random::sheaf(&mut r, &p, Q, 0, true),
        );
        let x = random::stationary_system(&mut r, &a, &b);
        assert_probes_agree(&mut r, &inverse_image_ind(&id, &x).unwrap(), &x);
        assert_probes_agree(&mut r, &direct_image_ind(&id, &x).unwrap(), &x);
        assert_probes_agree(&mut r, &proper_direct_image_ind(&id, &x).unwrap(), &x);
        let line = CellMap::identity(&Space::Line);
        let y = iota(&random::sheaf(&mut r, &Space::Line, Q, 3, false)).unwrap();
        assert_probes_agree(&mut r, &inverse_image_ind(&line, &y).unwrap(), &y);
    }

    #[test]
    fn pullback_of_constant_counts_components() {
        let mut r = rng(42);
        let pt = Space::point();
        let k = iota(&Sheaf::constant(&pt, Q, 1)).unwrap();
        for _ in 0..4 {
            let p = small_poset(&mut r, 6);
            let f = CellMap::constant(&p, &pt, 0).unwrap();
            let y = inverse_image_ind(&f, &k).unwrap();
            for u in probe_opens(&p).unwrap() {
                assert_eq!(probe(&y, &u), Dim::Finite(components(&p, &u)));
            }
        }
        let f = CellMap::constant(&Space::Line, &pt, 0).unwrap();
        let y = inverse_image_ind(&f, &k).unwrap();
        for _ in 0..6 {
            let u = random::open(&mut r, &Space::Line, 5, true);
            assert_eq!(
                probe(&y, &u),
                Dim::Finite(components(&Space::Line, &u)),
                "on {u}"
            );
        }
    }

    #[test]
    fn stalk_is_pullback_to_a_point() {
        let mut r = rng(43);
        let f = random::sheaf(&mut r, &Space::Line, Q, 3, false);
        let x = iota(&f).unwrap();
        for c in -6..=6 {
            let j = CellMap::point_inclusion(&Space::Line, c).unwrap();
            let s = inverse_image_ind(&j, &x).unwrap();
            assert_eq!(
                probe(&s, &OpenSet::whole(&Space::point())),
                Dim::Finite(f.dim(c))
            );
        }
    }

    #[test]
    fn pullback_is_exact() {
        let mut r = rng(44);
        for _ in 0..4 {
            let p = small_poset(&mut r, 5);
            let q = small_poset(&mut r, 3);
            let Some(f) = random::monotone_map(&mut r, &p, &q) else {
                continue;
            };
            let (a, b) = (
                random::sheaf(&mut r, &q, Q, 0, true),
                random::sheaf(&mut r, &q, Q, 0, true),
            );
            let phi = random::morphism(&mut r, &a, &b);
            let k = phi.kernel().unwrap();
            let im = phi.image().unwrap();
            let i = inverse_image_ind_morphism(&f, &iota_morphism(&k.inclusion).unwrap()).unwrap();
            let e =
                inverse_image_ind_morphism(&f, &iota_morphism(&im.coimage_map).unwrap()).unwrap();
            assert!(is_exact(&i, &e).unwrap().verdict().holds);
        }
    }

    #[test]
    fn pullback_pushforward_adjunction() {
        let mut r = rng(45);
        let mut done = 0;
        while done < 8 {
            let p = small_poset(&mut r, 5);
            let q = small_poset(&mut r, 4);
            let Some(f) = random::monotone_map(&mut r, &p, &q) else {
                continue;
            };
            let (a, b) = (
                random::sheaf(&mut r, &q, Q, 0, true),
                random::sheaf(&mut r, &q, Q, 0, true),
            );
            let g = random::stationary_system(&mut r, &a, &b);
            let x = iota(&random::sheaf(&mut r, &p, Q, 0, true)).unwrap();
            let lhs = hom_ind(&inverse_image_ind(&f, &g).unwrap(), &x).unwrap();
            let rhs = hom_ind(&g, &direct_image_ind(&f, &x).unwrap()).unwrap();
            assert_eq!(lhs.dim(), rhs.dim());
            done += 1;
        }
    }

    #[test]
    fn line_to_point() {
        let pt = Space::point();
        let f = CellMap::constant(&Space::Line, &pt, 0).unwrap();
        let k_x = Sheaf::constant(&Space::Line, Q, 1);
        let x = iota(&k_x).unwrap();
        assert!(
            is_ind_zero(&proper_direct_image_ind(&f, &x).unwrap())
                .unwrap()
                .holds
        );
        assert_eq!(
            probe(&direct_image_ind(&f, &x).unwrap(), &OpenSet::whole(&pt)),
            Dim::Finite(1)
        );
        // Γ_c((-n, n); k) = 0 = Γ_c(X; k): both ends vanish
        assert!(is_iso(&proper_comparison(&f, &k_x).unwrap()).unwrap().holds);
        let ray = Sheaf::constant_on(&LocallyClosedSet::closed_right_ray(0), Q, 1);
        assert!(is_iso(&proper_comparison(&f, &ray).unwrap()).unwrap().holds);
    }

    #[test]
    fn open_embedding_comparison_is_not_iso() {
        let k_x = Sheaf::constant(&Space::Line, Q, 1);
        let c = open_embedding_comparison(&OpenSet::right_ray(0), &k_x).unwrap();
        assert!(!is_iso(&c).unwrap().holds);
        assert!(
            is_ind_zero(&crate::indcat::kernel(&c).unwrap().object)
                .unwrap()
                .holds
        );
        let (s, t) = (c.source(), c.target());
        let probe_u = OpenSet::interval(0, 1);
        assert_eq!(
            (probe(s, &probe_u), probe(t, &probe_u)),
            (Dim::Finite(0), Dim::Finite(1))
        );
        let whole = open_embedding_comparison(&OpenSet::whole(&Space::Line), &k_x).unwrap();
        assert!(is_iso(&whole).unwrap().holds);
    }
}

mod formulas {
    use super::*;

    #[test]
    fn identity_square_passes() {
        let mut r = rng(51);
        let p = small_poset(&mut r, 5);
        let id = CellMap::identity(&p);
        let x = iota(&random::sheaf(&mut r, &p, Q, 0, true)).unwrap();
        let g = iota(&random::sheaf(&mut r, &p, Q, 0, true)).unwrap();
        assert!(projection_formula_check(&id, &x, &g).unwrap().passed());
        let sq = CartesianSquare::fiber_product(&id, &id).unwrap();
        assert!(base_change_check(&sq, &x).unwrap().passed());
    }

    #[test]
    fn three_cells_to_a_point() {
        // 0 < 1, 0 < 2
        let p = Space::poset(FinitePoset::new(3, &[(0, 1), (0, 2)]).unwrap());
        let pt = Space::point();
        let f = CellMap::constant(&p, &pt, 0).unwrap();
        let x = iota(&Sheaf::constant(&p, Q, 1)).unwrap();
        let g = iota(&Sheaf::constant(&pt, Q, 1)).unwrap();
        let rep = projection_formula_check(&f, &x, &g).unwrap();
        assert!(rep.passed());
        let whole = rep.lines.iter().find(|l| l.probe == "U{0}").unwrap();
        assert_eq!(whole.lhs, Dim::Finite(1));
        assert!(rep.to_string().ends_with("result pass [exact]"));
    }

    #[test]
    fn rejects_non_cartesian_squares() {
        let p = Space::poset(FinitePoset::chain(2));
        let pt = Space::point();
        let f = CellMap::constant(&p, &pt, 0).unwrap();
        let sq = CartesianSquare::fiber_product(&f, &CellMap::identity(&pt)).unwrap();
        assert!(CartesianSquare::new(
            sq.f.clone(),
            sq.g.clone(),
            sq.f_prime.clone(),
            sq.g_prime.clone()
        )
        .is_ok());
        let wrong = CellMap::constant(&p, &p, 0).unwrap();
        let id = CellMap::identity(&p);
        assert!(CartesianSquare::new(f.clone(), CellMap::identity(&pt), wrong, id).is_err());
    }

    #[test]
    fn known_base_change_failure() {
        // closed f whose fiber over 0 is disconnected inside a connected preimage of star 0
        let x = Space::poset(FinitePoset::new(4, &[(0, 3), (1, 2), (2, 3)]).unwrap());
        let y = Space::poset(FinitePoset::chain(2));
        let f = CellMap::new(
            x.clone(),
            y.clone(),
            crate::space::MapKind::Table(vec![0, 0, 1, 1]),
        )
        .unwrap();
        let g = CellMap::point_inclusion(&y, 0).unwrap();
        let z = LocallyClosedSet::from_open(
            OpenSet::new(crate::space::CellSet::from_cells(&x, [0, 3]).unwrap()).unwrap(),
        );
        let sheaf = Sheaf::constant_on(&z, Q, 1);
        let rep = base_change_check(
            &CartesianSquare::fiber_product(&f, &g).unwrap(),
            &iota(&sheaf).unwrap(),
        )
        .unwrap();
        let w = rep.witness().expect("base change fails here");
        assert_eq!((w.lhs, w.rhs), (Dim::Finite(0), Dim::Finite(1)));
    }
}
