//! Parsing, running and the command-line driver.

use std::process::Command;

use indsheaf_cli::dsl::parse;
use indsheaf_cli::error::CliError;
use indsheaf_cli::run::{run, Config};

fn run_text(text: &str) -> indsheaf_cli::run::Report {
    run(&parse(text).unwrap(), &Config::default()).unwrap()
}

fn results(text: &str) -> Vec<String> {
    run_text(text)
        .records
        .into_iter()
        .map(|r| r.result)
        .collect()
}

#[test]
fn empty_script_gives_an_empty_report() {
    let report = run_text("");
    assert!(report.records.is_empty());
    assert_eq!(
        report.to_string(),
        "# indsheaf report v1\n# field q trunc 16 seed 0\nsummary 0 records 0 failed"
    );
    let comments = run_text("# nothing here\n\n");
    assert_eq!(comments, report);
}

#[test]
fn receding_rays_by_indcolim() {
    let text =
        "let X = line();\nlet G = indcolim n: k_on(closed_ray(n));\nemit dim_hom(k(X), G);\n";
    assert_eq!(results(text), vec!["dim = 1 [exact]"]);
    let shown = results("show(indcolim n: k_on(closed_ray(n)));");
    assert!(shown[0].contains("translate"), "{}", shown[0]);
}

#[test]
fn growth_is_infinite_and_not_representable() {
    let out = results("dim_hom(k(point()), growth()); representable(growth());");
    assert_eq!(
        out,
        vec![
            "dim = inf [certified] cert(n0=0 p=1 grow)",
            "representable = no"
        ]
    );
}

#[test]
fn sheaf_queries() {
    let out = results(
        "let X = chain(2);\n\
         emit dim_hom(k(X), k(X));\n\
         emit dim_hom(k(X, 2), k(X, 3));\n\
         emit is_zero(zero(X));\n\
         emit is_mono(counit(interval(-2, 2)));",
    );
    assert_eq!(
        out,
        vec![
            "dim = 1 [exact]",
            "dim = 6 [exact]",
            "zero = yes [exact]",
            "mono = yes [exact]"
        ]
    );
}

#[test]
fn adjunction_queries_pass() {
    let report = run_text(
        "let P = chain(3);\n\
         emit check_adjunction(\"alpha_iota\", k(P), k_on(star(P, 1)));\n\
         emit check_adjunction(\"beta_alpha\", k_on(star(P, 2)), k(P));\n\
         emit check_adjunction(\"tensor_ihom\", k(P), k_on(star(P, 1)), k(P));\n\
         emit check_adjunction(\"pullback_push\", const_map(P, point(), 0), k(point()), k(P));",
    );
    assert_eq!(report.failures(), 0, "{report}");
    assert!(
        report
            .records
            .iter()
            .all(|r| r.result.ends_with("pass [exact]")),
        "{report}"
    );
}

#[test]
fn failed_checks_are_counted() {
    let report =
        run_text("check_mv(constant_presheaf(line()), [[interval(-3, -1), interval(1, 3)]]);");
    assert_eq!(report.failures(), 1);
    assert!(
        report.records[0].result.ends_with("result fail [exact]"),
        "{}",
        report.records[0].result
    );
}

#[test]
fn syntax_errors_carry_positions() {
    match parse("let X = line(;\n") {
        Err(CliError::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 14)),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    match parse("emit dim_hom(k(line()), k(line())\n") {
        Err(CliError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(
        parse("emit k(Y);"),
        Err(CliError::Unknown {
            line: 1,
            col: 8,
            ..
        })
    ));
    assert!(matches!(
        parse("emit nosuch(1);"),
        Err(CliError::Unknown { .. })
    ));
    assert!(matches!(parse("emit k();"), Err(CliError::Arity { .. })));
}

#[test]
fn runtime_errors_name_the_statement() {
    let script =
        parse("let P = chain(2);\nemit k(P);\nemit restrict_open(k(P), interval(0, 1));").unwrap();
    match run(&script, &Config::default()) {
        Err(CliError::Runtime { stmt, .. }) => assert_eq!(stmt, 3),
        other => panic!("expected a runtime error, got {other:?}"),
    }
}

#[test]
fn fields_change_answers_only_where_they_should() {
    let script = parse("dim_hom(k(chain(2)), k(chain(2)));").unwrap();
    let f5 = Config {
        field: indsheaf::linalg::Field::Prime(5),
        ..Config::default()
    };
    let report = run(&script, &f5).unwrap();
    assert!(report.header.contains("field fp:5"), "{}", report.header);
    assert_eq!(report.records[0].result, "dim = 1 [exact]");
}

#[test]
fn reports_are_deterministic() {
    let text = "run_suite(\"adjunctions\", 1);";
    let a = run_text(text).to_string();
    let b = run_text(text).to_string();
    assert_eq!(a, b);
    assert!(a.contains("# suite adjunctions"));
}

#[test]
fn save_and_load_through_files() {
    let dir = std::env::temp_dir().join(format!("indsheaf-script-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.isf");
    let p = path.display();
    let out = results(&format!(
        "let G = indcolim n: k_on(closed_ray(n));\nsave(G, \"{p}\");\nlet H = load(\"{p}\");\ndim_hom(k(line()), H);"
    ));
    assert_eq!(
        out,
        vec![format!("saved {p}"), "dim = 1 [exact]".to_string()]
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indsheaf"))
}

#[test]
fn exit_code_follows_failures() {
    let dir = std::env::temp_dir().join(format!("indsheaf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.isl");
    std::fs::write(
        &good,
        "dim_hom(k(line()), indcolim n: k_on(closed_ray(n)));\n",
    )
    .unwrap();
    let out = binary().arg("--script").arg(&good).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("dim = 1 [exact]"));

    let bad = dir.join("bad.isl");
    std::fs::write(
        &bad,
        "check_mv(constant_presheaf(line()), [[interval(-3, -1), interval(1, 3)]]);\n",
    )
    .unwrap();
    assert!(!binary()
        .arg("--script")
        .arg(&bad)
        .output()
        .unwrap()
        .status
        .success());

    let broken = dir.join("broken.isl");
    std::fs::write(&broken, "emit k(;\n").unwrap();
    let out = binary().arg("--script").arg(&broken).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("1:8: syntax error"));

    let report = dir.join("report.txt");
    let status = binary()
        .args([
            "--suite", "glueing", "--seed", "3", "--field", "fp:7", "--out",
        ])
        .arg(&report)
        .status();
    assert!(status.unwrap().success());
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("# indsheaf report v1\n# field fp:7 trunc 16 seed 3\n# suite glueing"));

    assert!(!binary()
        .args(["--field", "fp:4", "--suite", "glueing"])
        .output()
        .unwrap()
        .status
        .success());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tour_script_runs_clean() {
    let text = include_str!("../scripts/tour.isl");
    let report = run_text(text);
    assert_eq!(report.records.len(), 9);
    assert_eq!(report.failures(), 0, "{report}");
}
