use indsheaf::indcat::{free_growth, iota, receding_rays, Dim, Tag};
use indsheaf::linalg::Field;
use indsheaf::random;
use indsheaf::sheaf::Sheaf;
use indsheaf::space::{FinitePoset, OpenSet, Space};
use indsheaf_cli::error::CliError;
use indsheaf_cli::format::{load, save, DimRecord, Object, HEADER};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn round_trip(obj: Object) {
    let text = save(&obj);
    assert!(text.starts_with(HEADER));
    let back = load(&text).unwrap();
    assert_eq!(back, obj, "{text}");
    assert_eq!(save(&back), text);
}

#[test]
fn spaces_and_sheaves() {
    round_trip(Object::Space(Space::Line));
    let chain = Space::poset(FinitePoset::chain(5));
    round_trip(Object::Space(chain.clone()));
    round_trip(Object::Sheaf(Sheaf::constant(&chain, Field::Rationals, 2)));
    round_trip(Object::Sheaf(Sheaf::constant_on_open(
        &OpenSet::right_ray(2),
        Field::prime(7).unwrap(),
    )));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let s = if rng.gen_bool(0.5) {
            Space::Line
        } else {
            Space::poset(random::poset(&mut rng, 5))
        };
        let f = random::sheaf(&mut rng, &s, Field::Rationals, 3, false);
        round_trip(Object::Sheaf(f.clone()));
        let g = random::sheaf(&mut rng, &s, Field::Rationals, 3, false);
        round_trip(Object::Morphism(random::morphism(&mut rng, &f, &g)));
    }
}

#[test]
fn systems_keep_their_certificates() {
    let q = Field::Rationals;
    round_trip(Object::System(receding_rays(q).unwrap()));
    round_trip(Object::System(free_growth(q).unwrap()));
    round_trip(Object::System(
        iota(&Sheaf::constant(&Space::Line, q, 1)).unwrap(),
    ));
}

#[test]
fn tampered_levels_fail_revalidation() {
    let text = save(&Object::System(receding_rays(Field::Rationals).unwrap()));
    let tampered = text.replacen("(translate 1)", "(translate 2)", 1);
    assert!(matches!(load(&tampered), Err(CliError::Format(_))));
}

#[test]
fn version_is_checked() {
    let text = save(&Object::Space(Space::Line)).replace(HEADER, "indsheaf v0");
    assert!(matches!(load(&text), Err(CliError::Version(_))));
}

#[test]
fn truncated_values_are_not_exact() {
    let rec = DimRecord {
        dim: Dim::Finite(3),
        tag: Tag::Truncated(16),
    };
    assert!(rec.as_exact().is_err());
    round_trip(Object::Dim(rec));
    let inf = DimRecord {
        dim: Dim::Infinite,
        tag: Tag::Certified,
    };
    assert_eq!(inf.as_exact().unwrap(), inf);
    round_trip(Object::Dim(inf));
}

use rand::Rng;
