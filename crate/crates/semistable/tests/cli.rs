use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use semistable::json::{
    poly_from_json, ClassificationJson, CensusJson, CoverJson, EnumerationJson, GermJson, RecordJson, ResolveJson,
};
use semistable_core::germs::validate_germ;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semistable")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn resolve_prints_the_string() {
    assert_eq!(stdout(&["resolve", "5", "2"]), "[3,2]\n");
    assert_eq!(stdout(&["resolve", "4", "3"]), "[2,2,2]\n");
    let json: ResolveJson = serde_json::from_str(&stdout(&["resolve", "7", "3", "--json"])).unwrap();
    assert_eq!(json.hj, vec![3, 2, 2]);
    assert_eq!(json.graph.vertices.len(), 3);
    assert_eq!(run(&["resolve", "4", "2"]).status.code(), Some(2));
}

#[test]
fn classify_reports_fibres() {
    let text = stdout(&["classify", &path("quarter.json")]);
    assert!(text.contains("case T(k=1)"), "{text}");
    assert!(text.contains("1/4(1,1)"), "{text}");
    assert!(stdout(&["classify", &path("d4.json")]).contains("Du Val D4 fibre"));

    let json: ClassificationJson =
        serde_json::from_str(&stdout(&["classify", &path("quarter.json"), "--json", "--probe"])).unwrap();
    assert_eq!(json.isolatedness, "verified");
    assert_eq!(json.fibre, semistable::json::FibreJson::CyclicQuotient { r: 4, q: 1, kn: 2, hj: vec![4] });

    let json: ClassificationJson = serde_json::from_str(&stdout(&["classify", &path("d4.json"), "--json"])).unwrap();
    let graph = json.resolution.unwrap();
    assert_eq!(graph.vertices.len(), 4);
    assert!(graph.fork.is_some());
}

#[test]
fn exit_codes() {
    let out = run(&["classify", &path("not_coprime.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd"));

    assert_eq!(run(&["classify", "/nonexistent/spec.json"]).status.code(), Some(3));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "{{\"n\": 2, \"a\": ").unwrap();
    assert_eq!(run(&["classify", bad.path().to_str().unwrap()]).status.code(), Some(3));

    let mut unknown = tempfile::NamedTempFile::new().unwrap();
    write!(unknown, r#"{{"n": 1, "a": 0, "case": "Q", "g": []}}"#).unwrap();
    assert_eq!(run(&["classify", unknown.path().to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    // Weights that break semistability are a mathematical rejection.
    assert_eq!(run(&["blowup", &path("quarter.json"), "--weights", "1,3,2"]).status.code(), Some(2));
    // Non-normal germs classify but do not enumerate.
    let mut xy = tempfile::NamedTempFile::new().unwrap();
    write!(xy, r#"{{"n": 1, "a": 0, "case": "N", "g": [{{"coeff": 1, "exp": [0,0,1,0]}}]}}"#).unwrap();
    assert!(stdout(&["classify", xy.path().to_str().unwrap()]).contains("not normal"));
    assert_eq!(run(&["enumerate", xy.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let json: EnumerationJson =
        serde_json::from_str(&stdout(&["enumerate", &path("e6.json"), "--json"])).unwrap();
    assert_eq!(json.records.len(), 1);
    assert_eq!(json.records[0].w0.entries, [6, 4, 3]);
    assert_eq!(json.records[0].discrepancy, "1");
    assert_eq!(json.records[0].contraction_status, "divisorial-contraction");

    let json: EnumerationJson =
        serde_json::from_str(&stdout(&["enumerate", &path("a1.json"), "--bound", "3", "--json"])).unwrap();
    assert_eq!(json.records.len(), 3);
    assert_eq!(json.records[0].contraction_status, "pending-rho");

    let json: EnumerationJson =
        serde_json::from_str(&stdout(&["enumerate", &path("a1.json"), "--bound", "0", "--json"])).unwrap();
    assert!(json.records.is_empty());
}

#[test]
fn census_and_cover_commands() {
    let text = stdout(&["census", &path("index_one.json")]);
    assert!(text.contains("1 x A1"), "{text}");
    assert!(text.contains("(1:0:0:0): (xy = 0) in 1/2(1,-1,1)"), "{text}");
    assert!(text.contains("(0:1:0:0): smooth"), "{text}");

    let json: CensusJson = serde_json::from_str(&stdout(&["census", &path("index_two.json"), "--json"])).unwrap();
    assert!(json.interior.is_empty());
    assert!(json.origin.is_none());
    assert!(json.corners[0].smooth);
    assert_eq!((json.corners[1].r, json.corners[1].c), (3, 2));

    let json: CoverJson = serde_json::from_str(&stdout(&["cover", &path("quarter.json"), "--json"])).unwrap();
    assert_eq!((json.d, json.e), (2, 1));
    assert_eq!(json.lifted_weights, [1, 5, 3, 2]);
    assert_eq!(json.covered_discrepancy, "4");
    assert!(json.verified);

    // A weight flag overrides the germ file.
    let json: RecordJson =
        serde_json::from_str(&stdout(&["blowup", &path("quarter.json"), "--weights", "1,1,1/2", "--json"])).unwrap();
    assert_eq!(json.discrepancy, "1/2");
    let census = json.census.unwrap();
    assert_eq!(census.origin.unwrap().germ, "(xy + z^2 = 0) in 1/2(1,-1,1)");
    assert!(census.l_divergent);

    // D/E records carry no census.
    let mut e6 = tempfile::NamedTempFile::new().unwrap();
    write!(e6, r#"{{"n": 1, "a": 0, "case": "E6", "g": [], "weights": "6,4,3"}}"#).unwrap();
    assert_eq!(run(&["census", e6.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["enumerate".to_string(), path("quarter.json"), "--bound".into(), "5".into(), "--json".into()],
        vec!["enumerate".to_string(), path("a1.json"), "--bound".into(), "4".into()],
        vec!["classify".to_string(), path("quarter.json"), "--probe".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn json_round_trips() {
    let text = stdout(&["enumerate", &path("quarter.json"), "--bound", "4", "--json"]);
    let parsed: EnumerationJson = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);

    // The echoed germ validates back to the same germ.
    let spec: GermJson = serde_json::from_str(&std::fs::read_to_string(fixture("quarter.json")).unwrap()).unwrap();
    let germ = validate_germ(&spec.to_raw().unwrap()).unwrap();
    assert_eq!(validate_germ(&parsed.germ.to_raw().unwrap()).unwrap(), germ);

    for record in &parsed.records {
        let e = poly_from_json(&record.e_equation).unwrap();
        assert_eq!(e.display_with(semistable::json::CAPITALS).to_string(), record.e_equation_text);
        let again: RecordJson = serde_json::from_str(&serde_json::to_string(record).unwrap()).unwrap();
        assert_eq!(&again, record);
    }

    for name in ["quarter.json", "index_one.json", "index_two.json", "d4.json", "e6.json", "a1.json"] {
        let spec: GermJson = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let germ = validate_germ(&spec.to_raw().unwrap()).unwrap();
        let echoed = GermJson::from_germ(&germ);
        let back: GermJson = serde_json::from_str(&serde_json::to_string(&echoed).unwrap()).unwrap();
        assert_eq!(validate_germ(&back.to_raw().unwrap()).unwrap(), germ, "{name}");
    }
}
