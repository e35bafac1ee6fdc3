//! Functor-backed objects against sheaves with the same Hom functor.

mod common;

use common::oracle::Brute;
use indsheaf::extend::{check_mv, extend, PresheafOnT};
use indsheaf::linalg::Field;
use indsheaf::random;
use indsheaf::sheaf::PresentationStyle;
use indsheaf::space::Space;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sections_presheaf_reproduces_brute_force_sections() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for _ in 0..15 {
        let s = Space::poset(random::poset(&mut rng, 6));
        let g = random::sheaf(&mut rng, &s, Field::Rationals, 0, true);
        let f = PresheafOnT::sections(&g);
        let brute = Brute::from_sheaf(&g);
        for _ in 0..5 {
            let u = random::open(&mut rng, &s, 0, true);
            let w: Vec<usize> = (0..brute.n).filter(|&c| u.contains(c as i64)).collect();
            assert_eq!(f.dim(&u).unwrap(), brute.sections_dim(&w));
        }
    }
}

#[test]
fn evaluation_is_hom_into_the_sheaf() {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    for i in 0..15 {
        let s = if i % 3 == 0 {
            Space::Line
        } else {
            Space::poset(random::poset(&mut rng, 6))
        };
        let field = if i % 2 == 0 {
            Field::Rationals
        } else {
            Field::prime(5).unwrap()
        };
        let target = random::sheaf(&mut rng, &s, field, 2, true);
        let g = random::sheaf(&mut rng, &s, field, 2, true);
        let f = extend(&PresheafOnT::sections(&target));
        let hom = g.hom_space(&target).unwrap().dim();
        for style in [PresentationStyle::Minimal, PresentationStyle::Full] {
            assert_eq!(f.evaluate_with(&g, style).unwrap().dim(), hom);
        }
        let pairs: Vec<_> = (0..4)
            .map(|_| {
                (
                    random::open(&mut rng, &s, 2, true),
                    random::open(&mut rng, &s, 2, true),
                )
            })
            .collect();
        assert!(check_mv(f.presheaf(), &pairs).unwrap().passed());
    }
}
