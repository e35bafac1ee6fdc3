//! Invariants of the parser and the text format on generated inputs.

use indsheaf::linalg::Field;
use indsheaf::random;
use indsheaf::space::Space;
use indsheaf_cli::dsl::parse;
use indsheaf_cli::format::{load, save, Object};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parser_never_panics(text in "[a-z_()\\[\\],;:=#\" 0-9\n-]{0,60}") {
        let _ = parse(&text);
    }

    #[test]
    fn sheaves_round_trip(seed in any::<u64>(), on_line in any::<bool>(), prime in prop::sample::select(vec![0u32, 2, 3, 5, 7])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = if prime == 0 { Field::Rationals } else { Field::Prime(prime) };
        let space = if on_line { Space::Line } else { Space::poset(random::poset(&mut rng, 5)) };
        let f = random::sheaf(&mut rng, &space, field, 3, !on_line || seed % 2 == 0);
        let obj = Object::Sheaf(f);
        let text = save(&obj);
        let back = load(&text).unwrap();
        prop_assert!(back == obj);
        prop_assert_eq!(save(&back), text);
    }

    #[test]
    fn stationary_systems_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Space::poset(random::poset(&mut rng, 4));
        let (a, b) = (random::sheaf(&mut rng, &space, Field::Rationals, 0, true), random::sheaf(&mut rng, &space, Field::Rationals, 0, true));
        let obj = Object::System(random::stationary_system(&mut rng, &a, &b));
        let back = load(&save(&obj)).unwrap();
        prop_assert!(back == obj);
    }
}
