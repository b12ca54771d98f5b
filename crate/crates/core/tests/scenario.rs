use std::path::PathBuf;

use hecke_core::scenario::{cache_key, Cache, Entry, RunOptions, Scenario};
use hecke_core::Error;
use proptest::prelude::*;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn run_text(text: &str) -> String {
    let s = Scenario::parse(text).unwrap();
    let cmd = s.command().unwrap().to_string();
    s.run(&cmd, &RunOptions::default()).unwrap().text()
}

#[test]
fn minimal_validates() {
    let s = Scenario::parse("format = 1\n[ambient]\nkind = \"lattice\"\nrank = 2\n[subgroups.g]\ngenerators = [\"[1,0]\", \"[0,1]\"]\n").unwrap();
    let r = s.run("validate", &RunOptions::default()).unwrap();
    assert!(r.text().contains("valid: yes"));
    assert_eq!(r.results["counts"]["subgroups"], 1);
}

#[test]
fn unknown_reference_has_location() {
    let text = "format = 1\n[ambient]\nkind = \"lattice\"\nrank = 1\n[objects.x]\ncocycle = \"nowhere\"\n";
    match Scenario::parse(text).unwrap_err() {
        Error::UnknownReference { name, line, column } => assert_eq!((name.as_str(), line, column), ("nowhere", 6, 11)),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn reference_to_later_declaration_is_unknown() {
    let text = "format = 1\n[ambient]\nkind = \"permutation\"\ndegree = 2\ngenerators = [\"(1 2)\"]\n\
                [subgroups.a]\nconjugate = \"b\"\nby = \"e\"\n[subgroups.b]\nwhole = true\n";
    assert!(matches!(Scenario::parse(text).unwrap_err(), Error::UnknownReference { line: 7, .. }));
}

#[test]
fn wrong_section_is_a_type_mismatch() {
    let text = "format = 1\n[ambient]\nkind = \"lattice\"\nrank = 1\n[subgroups.g]\ngenerators = [\"[1]\"]\n[objects.x]\ncocycle = \"g\"\n";
    assert!(matches!(Scenario::parse(text).unwrap_err(), Error::TypeMismatch { .. }));
}

#[test]
fn syntax_errors_carry_positions() {
    let e = Scenario::parse("format = 1\n[meta\nname = 1\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
    let e = Scenario::parse("format = 2\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 1, column: 10, .. }), "{e:?}");
    let e = Scenario::parse("format = 1\nbogus = 3\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
}

#[test]
fn bad_cocycle_table_is_rejected() {
    let text = "format = 1\n[ambient]\nkind = \"permutation\"\ndegree = 2\ngenerators = [\"(1 2)\"]\n\
                [subgroups.g]\nwhole = true\n[cocycles.w]\nkind = \"table\"\ngroup = \"g\"\norder = 3\n\
                values = [{ g = \"(1 2)\", h = \"e\", k = 1 }]\n";
    assert!(Scenario::parse(text).is_err());
}

#[test]
fn corpus_round_trips_through_serialize() {
    for (name, text) in corpus() {
        let s = Scenario::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let once = s.serialize();
        let again = Scenario::parse(&once).unwrap_or_else(|e| panic!("{name} reparse: {e}\n{once}"));
        assert_eq!(again.serialize(), once, "{name}");
        assert_eq!(again.doc(), s.doc(), "{name}");
        assert_eq!(run_text(&once), run_text(&text), "{name}");
    }
}

#[test]
fn corpus_matches_golden_reports() {
    for (name, text) in corpus() {
        let golden = corpus_dir().join("expected").join(name.replace(".toml", ".txt"));
        let want = std::fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
        assert_eq!(run_text(&text), want, "{name}");
    }
}

#[test]
fn lattice_index_is_two() {
    let text = std::fs::read_to_string(corpus_dir().join("lattice_index.toml")).unwrap();
    let r = Scenario::parse(&text).unwrap().run("index", &RunOptions::default()).unwrap();
    assert_eq!(r.results["subfactors"][0]["index"], 2);
    assert_eq!(r.results["subfactors"][1]["index"], 8);
}

#[test]
fn galois_report_lists_auxiliary_primes() {
    let text = std::fs::read_to_string(corpus_dir().join("galois.toml")).unwrap();
    let r = Scenario::parse(&text).unwrap().run("galois", &RunOptions::default()).unwrap();
    assert_eq!(r.results["q"], serde_json::json!([3, 5, 7]));
}

#[test]
fn galois_needs_truncation_for_infinite_exponents() {
    let text = std::fs::read_to_string(corpus_dir().join("galois_infinite.toml")).unwrap();
    let text = text.replace("truncation = 4\n", "");
    let e = Scenario::parse(&text).unwrap().run("galois", &RunOptions::default()).unwrap_err();
    assert_ne!(e.exit_code(), 0);
    let r = Scenario::parse(&text).unwrap().run("galois", &RunOptions { truncation: Some(2) }).unwrap();
    assert_eq!(r.results["p"], serde_json::json!([2, 3]));
}

#[test]
fn touching_a_cocycle_value_changes_the_key() {
    let text = std::fs::read_to_string(corpus_dir().join("twisted.toml")).unwrap();
    let base = cache_key(&Scenario::parse(&text).unwrap().serialize(), "decompose", None);
    let reformatted = text.replace("[meta]\n", "# a comment\n[meta]\n");
    assert_eq!(cache_key(&Scenario::parse(&reformatted).unwrap().serialize(), "decompose", None), base);
    // k = 1 and k = 3 agree modulo 2, so this stays a valid cocycle but a different text.
    let touched = text.replacen("k = 1 }", "k = 3 }", 1);
    assert_ne!(cache_key(&Scenario::parse(&touched).unwrap().serialize(), "decompose", None), base);
    assert_ne!(cache_key(&Scenario::parse(&text).unwrap().serialize(), "dims", None), base);
    assert_ne!(cache_key(&Scenario::parse(&text).unwrap().serialize(), "decompose", Some(3)), base);
}

#[test]
fn cache_store_lookup_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path().join("c"));
    let key = cache_key("x", "validate", None);
    assert_eq!(cache.lookup(&key).unwrap(), None);
    let entry = Entry { text: "hello\n".into(), json: "{}\n".into() };
    cache.store(&key, &entry).unwrap();
    assert_eq!(cache.lookup(&key).unwrap(), Some(entry));
    std::fs::write(cache.dir().join(format!("{key}.json")), "{ not json").unwrap();
    assert!(matches!(cache.lookup(&key), Err(Error::CacheCorrupt(_))));
}

#[test]
fn error_exit_codes_by_class() {
    let fusion = std::fs::read_to_string(corpus_dir().join("s3_fusion.toml")).unwrap().replace("bound = 16", "bound = 2");
    let e = Scenario::parse(&fusion).unwrap().run("fusion", &RunOptions::default()).unwrap_err();
    assert_eq!(e.exit_code(), 4);
    let bad = "format = 1\n[divisor_sets.n]\nvalues = [1, 2, 3]\n[run]\nset = \"n\"\n";
    let e = Scenario::parse(bad).unwrap().run("galois", &RunOptions::default()).unwrap_err();
    assert_eq!((e.kind(), e.exit_code()), ("NotRealizable", 3));
    let e = Scenario::parse("format = 1\n[divisor_sets.n]\nvalues = [1, 4]\n").unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

proptest! {
    #[test]
    fn divisor_set_scenarios_round_trip(exps in proptest::collection::btree_map(prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 0u32..3, 0..4)) {
        let body: Vec<String> = exps.iter().map(|(p, e)| format!("\"{p}\" = {e}")).collect();
        let text = format!("format = 1\n[meta]\nname = \"p\"\n[divisor_sets.n]\nexponents = {{ {} }}\n[run]\ncommand = \"galois\"\nset = \"n\"\n", body.join(", "));
        let s = Scenario::parse(&text).unwrap();
        let once = s.serialize();
        prop_assert_eq!(Scenario::parse(&once).unwrap().serialize(), once);
        prop_assert_eq!(run_text(&text), run_text(&s.serialize()));
    }
}
