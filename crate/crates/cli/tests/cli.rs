use std::path::{Path, PathBuf};
use std::process::Command;

use fuzzdec::decompose::canonical_decompose;
use fuzzdec::{BinaryOp, FuzzyRelation};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fuzzdec").chain(args.iter().copied());
    let code = fuzzdec_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str], seed_env: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fuzzdec"));
    cmd.args(args).env_remove("FUZZDEC_SEED");
    if let Some(seed) = seed_env {
        cmd.env("FUZZDEC_SEED", seed);
    }
    let output = cmd.output().unwrap();
    (output.status.code().unwrap(), String::from_utf8(output.stdout).unwrap())
}

#[test]
fn decompose_prints_the_example_values() {
    let rel = data("preference.rel");
    let (code, out, _) = run(&["decompose", "--relation", &rel, "--conorm", "max"]);
    assert_eq!(code, 0);
    assert!(out.contains("P(x,y) = 1, I(x,y) = 0.5"), "{out}");
    assert!(out.contains("verification: holds"));
}

#[test]
fn missing_strong_decomposition_exits_one() {
    let rel = data("preference.rel");
    let (code, out, _) = run(&["decompose", "--relation", &rel, "--conorm", "max", "--norm", "min"]);
    assert_eq!(code, 1);
    assert!(out.contains("do not intersect"), "{out}");
}

#[test]
fn emitted_relations_round_trip_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let p_path: PathBuf = dir.path().join("p.rel");
    let i_path: PathBuf = dir.path().join("i.rel");
    let rel = data("three.rel");
    for conorm in ["probabilistic", "schweizer_sklar:lambda=-0.5", "hamacher:lambda=2"] {
        let (code, _, err) = run(&[
            "decompose",
            "--relation",
            &rel,
            "--conorm",
            conorm,
            "--strict-out",
            p_path.to_str().unwrap(),
            "--indifference-out",
            i_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let r = FuzzyRelation::parse(&std::fs::read_to_string(&rel).unwrap()).unwrap();
        let s = fuzzdec::ops::parse_op_spec(conorm, fuzzdec::Kind::Conorm).unwrap();
        let d = canonical_decompose(&r, &s).unwrap();
        let p = FuzzyRelation::parse(&std::fs::read_to_string(&p_path).unwrap()).unwrap();
        let i = FuzzyRelation::parse(&std::fs::read_to_string(&i_path).unwrap()).unwrap();
        let bits = |m: &FuzzyRelation| m.degrees().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&p), bits(d.strict()), "{conorm}");
        assert_eq!(bits(&i), bits(d.indifference()), "{conorm}");
        assert_eq!(p.labels(), r.labels());
    }
}

#[test]
fn audit_reports_each_axiom() {
    let rel = data("tie.rel");
    let (code, out, _) = run(&["audit", "--relation", &rel, "--conorm", "max"]);
    assert_eq!(code, 0);
    for k in 1..=6 {
        assert!(out.contains(&format!("FP{k} pass")), "{out}");
    }
    assert!(out.contains("overall: pass"));
}

#[test]
fn audit_under_a_discontinuous_conorm_exits_one() {
    let rel = data("three.rel");
    let (code, out, _) = run(&["audit", "--relation", &rel, "--conorm", "drastic"]);
    assert_eq!(code, 1);
    assert!(out.contains("not applicable"), "{out}");
}

#[test]
fn boundary_violating_table_fails_the_axioms() {
    let spec = format!("custom:table={}", data("not_a_norm.table"));
    let (code, out, _) = run(&["check-norm", "--op", &spec]);
    assert_eq!(code, 1);
    assert!(
        out.contains("axioms on") && out.contains("fails:") && out.contains("boundary"),
        "{out}"
    );
}

#[test]
fn builtin_operators_pass_check_norm() {
    for (op, kind) in [
        ("min", None),
        ("max", None),
        ("lukasiewicz", Some("conorm")),
        ("hamacher:lambda=+inf", Some("norm")),
    ] {
        let mut args = vec!["check-norm", "--op", op];
        if let Some(k) = kind {
            args.extend(["--kind", k]);
        }
        let (code, out, _) = run(&args);
        assert_eq!(code, 0, "{op}: {out}");
        assert!(out.contains("axioms on") && out.contains("holds"), "{out}");
    }
}

#[test]
fn divisors_print_intervals_and_verdicts() {
    let (code, out, _) = run(&[
        "divisors",
        "--conorm",
        "lukasiewicz",
        "--norm",
        "lukasiewicz",
        "--w",
        "0.5",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.contains("w = 0.5: D¹ = [0.5, 1], D⁰ = [0, 0.5], D¹ ∩ D⁰ = {0.5}"),
        "{out}"
    );
    assert!(out.contains("strong decompositions unique: holds"));

    let (code, out, _) = run(&["divisors", "--conorm", "max", "--norm", "min"]);
    assert_eq!(code, 1);
    assert!(out.contains("strong decompositions exist: fails"), "{out}");

    let (code, _, _) = run(&["divisors", "--conorm", "max", "--w", "1.5"]);
    assert_eq!(code, 2);
}

#[test]
fn region_writes_a_csv_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("region.csv");
    let (code, out, _) = run(&[
        "region",
        "--conorm",
        "lukasiewicz",
        "--norm",
        "product",
        "--resolution",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,b,member");
    assert_eq!(lines.len(), 1 + 11 * 11);
    assert!(lines.contains(&"0.5,0.5,1") && lines.contains(&"0.5,0.3,0"));
}

#[test]
fn restricted_domains() {
    let (code, out, _) = run(&["restricted", "--connected-by", "max", "--conorm", "drastic"]);
    assert_eq!((code, out.trim_end().ends_with("holds")), (0, true), "{out}");
    let (code, out, _) = run(&["restricted", "--connected-by", "lukasiewicz", "--conorm", "drastic"]);
    assert_eq!(code, 1);
    assert!(out.contains("fails"), "{out}");
    let (code, _, _) = run(&["restricted", "--conorm", "drastic"]);
    assert_eq!(code, 2);
}

#[test]
fn tables_end_with_the_mismatch_count() {
    for which in ["1", "2"] {
        let (code, out, _) = run(&["tables", "--which", which]);
        let last = out.lines().last().unwrap();
        let count: usize = last
            .strip_suffix(" mismatches")
            .and_then(|s| s.rsplit(' ').next())
            .and_then(|n| n.parse().ok())
            .unwrap_or_else(|| panic!("unexpected last line `{last}`"));
        assert_eq!(code, if count == 0 { 0 } else { 1 }, "table {which}");
    }
}

#[test]
fn tables_csv_has_one_row_per_entry() {
    let (_, out, err) = run(&["tables", "--which", "1", "--format", "csv"]);
    assert_eq!(out.lines().next(), Some("row,column,regime,expected,computed,match"));
    assert_eq!(out.lines().count(), 1 + 56);
    assert!(err.contains("56 entries compared"));
}

#[test]
fn classify_reports_open_cases_as_undetermined() {
    let (code, out, _) = run(&["classify", "--conorm", "schweizer_sklar:lambda=2"]);
    assert_eq!(code, 0);
    assert!(out.contains("undetermined"), "{out}");
    assert!(!out.contains("speculative, not authoritative"));
    let (_, out, _) = run(&["classify", "--conorm", "max"]);
    assert!(out.contains("induced rule"), "{out}");
}

#[test]
fn identical_seeds_give_identical_reports() {
    let args = [
        "restricted",
        "--transitive-by",
        "product",
        "--conorm",
        "probabilistic",
        "--seed",
        "7",
    ];
    assert_eq!(binary(&args, None), binary(&args, None));
    let classify = ["classify", "--conorm", "lukasiewicz", "--seed", "11"];
    assert_eq!(binary(&classify, None), binary(&classify, None));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let flag = binary(&["classify", "--conorm", "ordinal_sum", "--seed", "99"], None);
    let env = binary(&["classify", "--conorm", "ordinal_sum"], Some("99"));
    assert_eq!(flag, env);
    let (code, _) = binary(&["classify", "--conorm", "max"], Some("not-a-number"));
    assert_eq!(code, 2);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let rel = data("preference.rel");
    let cases: Vec<Vec<String>> = vec![
        vec![
            "decompose".into(),
            "--relation".into(),
            rel.clone(),
            "--conorm".into(),
            "max".into(),
            "--bogus".into(),
        ],
        vec![
            "decompose".into(),
            "--relation".into(),
            "/nonexistent.rel".into(),
            "--conorm".into(),
            "max".into(),
        ],
        vec![
            "decompose".into(),
            "--relation".into(),
            rel.clone(),
            "--conorm".into(),
            "nonsense".into(),
        ],
        vec![
            "decompose".into(),
            "--relation".into(),
            rel.clone(),
            "--conorm".into(),
            "min".into(),
        ],
        vec![
            "decompose".into(),
            "--relation".into(),
            rel.clone(),
            "--conorm".into(),
            "max".into(),
            "--mode".into(),
            "strong".into(),
        ],
        vec![
            "decompose".into(),
            "--relation".into(),
            rel,
            "--conorm".into(),
            "hamacher:lambda=-1".into(),
        ],
        vec![
            "region".into(),
            "--conorm".into(),
            "max".into(),
            "--out".into(),
            "/nonexistent/dir/r.csv".into(),
        ],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = run(&refs);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_relation_names_row_and_column() {
    let (code, _, err) = run(&["decompose", "--relation", &data("bad_degree.rel"), "--conorm", "max"]);
    assert_eq!(code, 2);
    assert!(err.contains("row 2, column 1"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decompose") && out.contains("tables"));
}

#[test]
fn library_and_cli_agree_on_the_strict_part() {
    let rel = data("three.rel");
    let (_, out, _) = run(&["decompose", "--relation", &rel, "--conorm", "lukasiewicz"]);
    let r = FuzzyRelation::parse(&std::fs::read_to_string(&rel).unwrap()).unwrap();
    let d = canonical_decompose(&r, &BinaryOp::lukasiewicz(fuzzdec::Kind::Conorm)).unwrap();
    assert!(out.contains(&d.strict().to_text()), "{out}");
}
