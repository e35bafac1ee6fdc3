//! Acceptance criteria. Each test prints one `ACn pass|fail` line and
//! fails if the criterion is not met.

use indsheaf::indcat::{beta_closed, beta_open, free_growth, iota, receding_rays, vertex_kernel};
use indsheaf::linalg::Field;
use indsheaf::random;
use indsheaf::sheaf::Sheaf;
use indsheaf::space::{CellSet, LocallyClosedSet, OpenSet, Space};
use indsheaf_cli::dsl::parse;
use indsheaf_cli::format::{load, save, Object};
use indsheaf_cli::run::{run, Config};
use indsheaf_cli::suites::{run_suite, SuiteConfig, SuiteReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rationals;

fn verdict(name: &str, ok: bool, detail: &str) {
    println!("{name} {}: {detail}", if ok { "pass" } else { "fail" });
    assert!(ok, "{name} failed: {detail}");
}

fn suite(name: &str) -> SuiteReport {
    let cfg = SuiteConfig {
        field: Q,
        seed: 0,
        trunc: indsheaf::indcat::DEFAULT_TRUNCATION,
    };
    run_suite(name, &cfg).unwrap()
}

fn script(text: &str) -> Vec<String> {
    run(&parse(text).unwrap(), &Config::default())
        .unwrap()
        .records
        .into_iter()
        .map(|r| r.result)
        .collect()
}

fn summary(r: &SuiteReport) -> String {
    let failing: Vec<String> = r
        .lines
        .iter()
        .filter(|l| !l.ok())
        .map(|l| l.label.clone())
        .collect();
    if failing.is_empty() {
        format!("{} checks, all instances pass", r.lines.len())
    } else {
        format!("failing: {}", failing.join(", "))
    }
}

#[test]
fn ac1_growth_example() {
    let out = script("let X = growth();\ndim_hom(k(point()), X);\nrepresentable(X);");
    let ok = out[0].starts_with("dim = inf [certified]") && out[1] == "representable = no";
    let r = suite("examples");
    let lib = [
        "growth_hom_is_infinite_certified",
        "growth_not_representable",
    ]
    .iter()
    .all(|l| r.line(l).unwrap().ok());
    verdict("AC1", ok && lib, &format!("{}; {}", out[0], out[1]));
}

#[test]
fn ac2_receding_rays() {
    let out = script("let G = indcolim n: k_on(closed_ray(n));\ndim_hom(k(line()), G);");
    let r = suite("examples");
    let vanish = r.line("rays_vanish_on_bounded_opens").unwrap();
    let ok = out[0] == "dim = 1 [exact]"
        && vanish.ok()
        && vanish.total == 10
        && r.line("rays_hom_from_k_x_is_one").unwrap().ok();
    verdict(
        "AC2",
        ok,
        &format!(
            "Hom(k_X, G) {}; G|_U zero on {}/{} bounded opens",
            out[0], vanish.passed, vanish.total
        ),
    );
}

#[test]
fn ac3_iota_alpha_beta() {
    let r = suite("iab");
    let counted = r.line("alpha_iota_is_identity").unwrap().total >= 50;
    verdict("AC3", r.passed() && counted, &summary(&r));
}

#[test]
fn ac4_tilde_sheaves() {
    let r = suite("ktilde");
    verdict("AC4", r.passed(), &summary(&r));
}

#[test]
fn ac5_abelian() {
    let r = suite("abelian");
    let counted = r.lines.iter().all(|l| l.total >= 100);
    verdict("AC5", r.passed() && counted, &summary(&r));
}

#[test]
fn ac6_six_operations() {
    let r = suite("sixops");
    verdict("AC6", r.passed(), &summary(&r));
}

#[test]
fn ac7_extension() {
    let r = suite("extend");
    verdict("AC7", r.passed(), &summary(&r));
}

#[test]
fn ac8_glueing() {
    let r = suite("glueing");
    let counted = r.line("hom_presheaf_equalizer").unwrap().total >= 25;
    verdict("AC8", r.passed() && counted, &summary(&r));
}

fn fixtures() -> Vec<Object> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let line = Space::Line;
    let k_line = Sheaf::constant(&line, Q, 1);
    let poset = Space::poset(random::poset(&mut rng, 5));
    let mut out = vec![
        Object::Space(line.clone()),
        Object::Space(poset.clone()),
        Object::Sheaf(k_line.clone()),
        Object::Sheaf(random::sheaf(&mut rng, &poset, Field::Prime(5), 0, true)),
        Object::Sheaf(random::sheaf(&mut rng, &line, Q, 3, true)),
        Object::Sheaf(Sheaf::constant_on(
            &LocallyClosedSet::closed_right_ray(0),
            Q,
            1,
        )),
        Object::System(free_growth(Q).unwrap()),
        Object::System(receding_rays(Q).unwrap()),
        Object::System(iota(&k_line).unwrap()),
        Object::System(beta_open(&OpenSet::interval(-2, 3), Q).unwrap()),
        Object::System(beta_open(&OpenSet::right_ray(0), Q).unwrap()),
        Object::System(
            beta_closed(&CellSet::from_cells(&line, [0, 1, 2]).unwrap(), &line, Q).unwrap(),
        ),
        Object::System(vertex_kernel(0, Q).unwrap().0),
    ];
    let (a, b) = (
        random::sheaf(&mut rng, &poset, Q, 0, true),
        random::sheaf(&mut rng, &poset, Q, 0, true),
    );
    out.push(Object::System(random::stationary_system(&mut rng, &a, &b)));
    out.push(Object::Morphism(random::morphism(&mut rng, &a, &b)));
    out
}

#[test]
fn ac9_determinism_and_round_trips() {
    let names = indsheaf_cli::suites::SUITES;
    let text: String = names
        .iter()
        .map(|n| format!("run_suite(\"{n}\");\n"))
        .collect();
    let parsed = parse(&text).unwrap();
    let first = run(&parsed, &Config::default()).unwrap().to_string();
    let second = run(&parsed, &Config::default()).unwrap().to_string();
    let identical = first == second;

    let objects = fixtures();
    let mut round_trips = 0;
    for obj in &objects {
        let written = save(obj);
        if load(&written).is_ok_and(|back| &back == obj && save(&back) == written) {
            round_trips += 1;
        }
    }
    let ok = identical && round_trips == objects.len();
    verdict(
        "AC9",
        ok,
        &format!(
            "full suite script {} bytes, reports {}; {round_trips}/{} fixtures round-trip",
            first.len(),
            if identical { "identical" } else { "differ" },
            objects.len()
        ),
    );
}
