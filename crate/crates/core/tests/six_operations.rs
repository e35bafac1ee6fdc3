//! The projection formula and base change reports, checked probe by probe
//! against a brute-force construction of both sides.

mod common;

use common::oracle::{table, Brute};
use indsheaf::indcat::{iota, Dim};
use indsheaf::linalg::Field;
use indsheaf::random;
use indsheaf::sixops::{
    base_change_check, probe_opens, projection_formula_check, CartesianSquare, Report,
};
use indsheaf::space::{OpenSet, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cells(space: &Space, u: &OpenSet) -> Vec<usize> {
    let n = space.as_poset().unwrap().size();
    (0..n).filter(|&c| u.contains(c as i64)).collect()
}

fn assert_matches(report: &Report, space: &Space, lhs: &Brute, rhs: &Brute) {
    let probes = probe_opens(space).unwrap();
    assert_eq!(report.lines.len(), probes.len());
    for (line, u) in report.lines.iter().zip(&probes) {
        let w = cells(space, u);
        assert_eq!(line.lhs, Dim::Finite(lhs.sections_dim(&w)), "lhs at {u}");
        assert_eq!(line.rhs, Dim::Finite(rhs.sections_dim(&w)), "rhs at {u}");
        assert_eq!(line.holds, line.lhs == line.rhs);
    }
}

#[test]
fn projection_formula_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut done = 0;
    while done < 25 {
        let x = Space::poset(random::poset(&mut rng, 5));
        let y = Space::poset(random::poset(&mut rng, 4));
        let Some(f) = random::monotone_map(&mut rng, &x, &y) else {
            continue;
        };
        let field = if done % 2 == 0 {
            Field::Rationals
        } else {
            Field::prime(5).unwrap()
        };
        let a = random::sheaf(&mut rng, &x, field, 0, true);
        let b = random::sheaf(&mut rng, &y, field, 0, true);
        let report = projection_formula_check(&f, &iota(&a).unwrap(), &iota(&b).unwrap()).unwrap();
        let t = table(&f);
        let (ba, bb) = (Brute::from_sheaf(&a), Brute::from_sheaf(&b));
        let lhs = ba.tensor(&bb.pull(&t, &x)).push_proper(&t, &y);
        let rhs = ba.push_proper(&t, &y).tensor(&bb);
        assert_matches(&report, &y, &lhs, &rhs);
        done += 1;
    }
}

#[test]
fn base_change_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let mut done = 0;
    while done < 25 {
        let x = Space::poset(random::poset(&mut rng, 4));
        let y = Space::poset(random::poset(&mut rng, 3));
        let y2 = Space::poset(random::poset(&mut rng, 3));
        let (Some(f), Some(g)) = (
            random::monotone_map(&mut rng, &x, &y),
            random::monotone_map(&mut rng, &y2, &y),
        ) else {
            continue;
        };
        let sq = CartesianSquare::fiber_product(&f, &g).unwrap();
        let a = random::sheaf(&mut rng, &x, Field::Rationals, 0, true);
        let report = base_change_check(&sq, &iota(&a).unwrap()).unwrap();
        let ba = Brute::from_sheaf(&a);
        let lhs = ba.push_proper(&table(&f), &y).pull(&table(&g), &y2);
        let x2 = sq.g_prime.source().clone();
        let rhs = ba
            .pull(&table(&sq.g_prime), &x2)
            .push_proper(&table(&sq.f_prime), &y2);
        assert_matches(&report, &y2, &lhs, &rhs);
        done += 1;
    }
}
