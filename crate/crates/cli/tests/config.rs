use ifslab::config::{parse_config, ConfigError, PAPER_TOML};
use ifslab::paper_config;
use ifslab_core::builtin::OddEven;
use ifslab_core::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(text: &str) -> ConfigError {
    parse_config(text, "test.toml").unwrap_err()
}

fn rule(e: &ConfigError) -> &'static str {
    match e {
        ConfigError::Invalid { rule, .. } => rule,
        other => panic!("expected a validation error, got {other}"),
    }
}

const SPACE: &str = "[space]\natoms = [\"a\", \"b\"]\nblocks = [\"ODD\", \"EVEN\"]\n";

#[test]
fn shipped_config_is_the_builtin_instance() {
    let cfg = paper_config();
    let m = OddEven::new();
    assert!(cfg.warnings.is_empty());
    assert_eq!(cfg.maps["f"], m.f);
    assert_eq!(cfg.maps["g"], m.g);
    assert_eq!(cfg.ifs["paper"], ["f", "g"]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let a = sample::random_set(&cfg.ground, &mut rng, 8, 3);
        let b = m.point_set(&[]).union(&a).unwrap();
        assert_eq!(
            cfg.topology.is_open(&a).unwrap(),
            m.topology.is_open(&b).unwrap(),
            "{a}"
        );
    }
    assert_eq!(parse_config(PAPER_TOML, "again").unwrap().maps, cfg.maps);
}

#[test]
fn missing_block_rule_is_a_totality_error() {
    let e = err(&format!(
        "{SPACE}[map.f]\natoms = {{ a = \"atom:a\", b = \"atom:a\" }}\nblocks = {{ ODD = \"EVEN\" }}\n"
    ));
    assert_eq!(rule(&e), "totality");
    assert!(e.to_string().contains("EVEN"), "{e}");
}

#[test]
fn meets_empty_is_rejected() {
    let e = err(&format!("{SPACE}[[topology.clause]]\nmeets = \"empty\"\n"));
    assert_eq!(rule(&e), "clauses");
}

#[test]
fn undeclared_names_are_rejected() {
    let e = err(&format!("{SPACE}[ifs.s]\nmaps = [\"h\"]\n"));
    assert_eq!(rule(&e), "references");
    let e = err(&format!(
        "{SPACE}[map.f]\nidentity = true\natoms = {{ c = \"atom:a\" }}\n"
    ));
    assert_eq!(rule(&e), "references");
}

#[test]
fn duplicate_overrides_are_rejected() {
    let e = err(&format!(
        "{SPACE}[map.f]\nidentity = true\noverrides = [{{ at = \"block:ODD[2]\", to = \"atom:a\" }}, {{ at = \"block:ODD[2]\", to = \"atom:b\" }}]\n"
    ));
    assert_eq!(rule(&e), "overrides");
}

#[test]
fn bounds_must_be_positive() {
    let e = err(&format!("{SPACE}[bounds]\nmax_index = 0\n"));
    assert_eq!(rule(&e), "bounds");
}

#[test]
fn bad_covers_are_rejected() {
    let e = err(&format!(
        "{SPACE}[[topology.clause]]\nsubset_of = \"X\"\n[cover.c]\nsets = [\"ODD\", \"EVEN\"]\n"
    ));
    assert_eq!(rule(&e), "cover");
}

#[test]
fn expression_errors_name_their_location() {
    let e = err(&format!("{SPACE}[sets]\nA = \"ODD | EVN\"\n"));
    let ConfigError::Expr { at, source, .. } = &e else {
        panic!("{e}")
    };
    assert_eq!(at, "sets.A");
    assert_eq!(source.column, 7);
}

#[test]
fn toml_errors_carry_positions() {
    let e = err("[space]\natoms = [\"a\"\n");
    assert!(matches!(e, ConfigError::Parse { .. }));
    assert!(e.to_string().contains("line"), "{e}");
    let e = err(&format!("{SPACE}[bounds]\nmax_idx = 3\n"));
    assert!(e.to_string().contains("max_idx"), "{e}");
}

#[test]
fn named_sets_resolve_in_any_order() {
    let cfg = parse_config(
        &format!("{SPACE}[sets]\nA = \"B - atom:a\"\nB = \"X\"\n[[topology.clause]]\nsubset_of = \"X\"\n"),
        "t",
    )
    .unwrap();
    assert_eq!(cfg.sets["A"].to_string(), "atom:b | ODD | EVEN");
    let e = err(&format!("{SPACE}[sets]\nA = \"B\"\nB = \"A\"\n"));
    assert!(matches!(e, ConfigError::Expr { .. }));
}

#[test]
fn missing_whole_space_clause_warns() {
    let cfg = parse_config(
        &format!("{SPACE}[[topology.clause]]\nsubset_of = \"ODD\"\n"),
        "t",
    )
    .unwrap();
    assert!(!cfg.warnings.is_empty());
}
