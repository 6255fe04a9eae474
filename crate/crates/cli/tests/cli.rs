use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;
use tempfile::TempDir;

fn esdecide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esdecide"))
        .args(args)
        .env_remove("ESDECIDE_TYPE_CAP")
        .env_remove("ESDECIDE_CELL_BUDGET")
        .env_remove("ESDECIDE_TIME_LIMIT")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn load_schema(name: &str) -> Value {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
    let text = std::fs::read_to_string(root.join(format!("{name}.schema.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn verdict_schema() -> JSONSchema {
    JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .with_document("urn:esdecide:type".into(), load_schema("type"))
        .with_document("urn:esdecide:witness".into(), load_schema("witness"))
        .compile(&load_schema("verdict"))
        .unwrap()
}

fn assert_valid(schema: &JSONSchema, doc: &Value) {
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:?}\n{doc:#}");
    }
}

#[test]
fn decide_exit_codes_and_schema() {
    let dir = TempDir::new().unwrap();
    let schema = verdict_schema();

    let mono = write(&dir, "mono.pred", "x1 < x2 ; x1 > x2 ; x1 = x2\n");
    let out = esdecide(&["decide", arg(&mono)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["answer"], "YES");
    assert_valid(&schema, &v);

    let inc = write(&dir, "inc.pred", "x1 < x2\n");
    let out = esdecide(&["decide", arg(&inc)]);
    assert_eq!(out.status.code(), Some(10));
    let v = json_of(&out);
    assert_eq!(v["answer"], "NO");
    assert!(v["witness"]["seq"].as_array().is_some_and(|s| !s.is_empty()));
    assert_valid(&schema, &v);
}

#[test]
fn exhausted_budget_is_undecided() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "pair.pred", "x1 < x2 ; x1 >= x2\n");
    let out = esdecide(&["decide", arg(&p), "--type-cap", "1"]);
    assert_eq!(out.status.code(), Some(20));
    let v = json_of(&out);
    assert_eq!(v["answer"], "UNDECIDED");
    assert!(!v["undecided"].as_array().unwrap().is_empty());
    assert_valid(&verdict_schema(), &v);
}

#[test]
fn malformed_predicate_reports_position() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.pred", "x1 < * x2\n");
    let out = esdecide(&["decide", arg(&p)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn reproducible_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "inc.pred", "x1 < x2\n");
    let a = esdecide(&["--reproducible", "decide", arg(&p)]);
    let b = esdecide(&["--reproducible", "decide", arg(&p)]);
    assert_eq!(a.status.code(), Some(10));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["stats"]["elapsedMs"], 0);
}

#[test]
fn gen_then_homog() {
    let dir = TempDir::new().unwrap();
    let out = esdecide(&["--format", "text", "gen", "--family", "integers", "--N", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 32);

    let seq = write(&dir, "ints.seq", &text);
    let pred = write(&dir, "lt.pred", "x1 < x2\n");
    let out = esdecide(&["homog", arg(&seq), arg(&pred), "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
    assert_eq!(v["members"][0]["holds"], "everywhere");
}

#[test]
fn gen_shifted_reciprocal() {
    let out = esdecide(&["gen", "--family", "shifted-reciprocal", "--A", "3", "--B", "1", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["sequence"], serde_json::json!(["4", "7/2", "10/3"]));
}

#[test]
fn es_exact_monotone() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "mono.pred", "x1 < x2 ; x1 >= x2\n");
    let out = esdecide(&["es-exact", arg(&p), "--n", "3", "--Nmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["value"], serde_json::json!({"kind": "exact", "value": 5}));

    let p = write(&dir, "inc.pred", "x1 < x2\n");
    let out = esdecide(&["es-exact", arg(&p), "--n", "3", "--Nmax", "6"]);
    assert_eq!(json_of(&out)["value"]["kind"], "exceeds");
}

#[test]
fn qe_sentences() {
    let out = esdecide(&["--format", "text", "qe", "forall x. x^2 + 1 > 0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "true");

    let out = esdecide(&["qe", "exists x. x^2 < 0"]);
    assert_eq!(json_of(&out)["truth"], false);

    let out = esdecide(&["qe", "--smtlib", "exists x. x^2 = 2"]);
    let script = json_of(&out)["smtlib"].as_str().unwrap().to_string();
    assert!(script.contains("(check-sat)"), "{script}");
}

#[test]
fn missing_file_is_an_error() {
    let out = esdecide(&["decide", "/nonexistent/set.pred"]);
    assert_eq!(out.status.code(), Some(1));
}
