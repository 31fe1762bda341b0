use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spf-lab"))
        .args(args)
        .env_remove("SPF_CACHE_DIR")
        .output()
        .expect("spawn spf-lab")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn validate(schema: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema} rejects output: {msgs:?}\n{v:#}");
}

fn text(args: &[&str]) -> (String, i32) {
    let out = run(args);
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn dims(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn ext_of_identity_is_hom() {
    let (v, code) = json(&["ext", "I", "I"]);
    assert_eq!(code, 0);
    validate("ext.schema.json", &v);
    assert_eq!(dims(&v["dims"]), [1, 0, 0, 0, 0]);
}

#[test]
fn ext_of_the_twist_at_two() {
    let (v, code) = json(&["ext", "frob(1)", "frob(1)", "--p", "2"]);
    assert_eq!(code, 0);
    validate("ext.schema.json", &v);
    assert_eq!(dims(&v["dims"]), [1, 0, 1, 0, 0]);
    assert_eq!(v["seed"], 0x5eed);
}

#[test]
fn ext_symmetric_to_divided_square() {
    let (v, _) = json(&["ext", "S^2", "G^2", "--imax", "2"]);
    validate("ext.schema.json", &v);
    assert_eq!(dims(&v["dims"])[0], 1);
}

#[test]
fn text_and_json_agree() {
    let (v, _) = json(&["ext", "frob(1)", "frob(1)", "--p", "3", "--imax", "4"]);
    let (t, code) = text(&["ext", "frob(1)", "frob(1)", "--p", "3", "--imax", "4"]);
    assert_eq!(code, 0);
    let from_text: Vec<u64> = t
        .lines()
        .filter_map(|l| l.trim().strip_prefix("i = "))
        .map(|l| l.split(": ").nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(from_text, dims(&v["dims"]));
    assert_eq!(from_text, [1, 0, 1, 0, 1]);
}

#[test]
fn formality_of_the_identity() {
    let (v, code) = json(&["formality", "S^1", "--d", "1"]);
    assert_eq!(code, 0);
    validate("formality.schema.json", &v);
    assert_eq!(v["verdict"], "even-concentration");
    let degrees: Vec<u64> = v["degrees"].as_array().unwrap().iter().filter(|r| r["dim"] != 0).map(|r| r["i"].as_u64().unwrap()).collect();
    assert_eq!(degrees, [0, 2]);
}

#[test]
fn formality_rejects_odd_primes() {
    let (v, code) = json(&["formality", "S^1", "--p", "3"]);
    assert_eq!(code, 2);
    validate("error.schema.json", &v);
}

#[test]
fn coresolve_the_twist() {
    let (v, code) = json(&["coresolve", "frob(1)", "--p", "2", "--n", "2", "--imax", "4"]);
    assert_eq!(code, 0);
    validate("coresolve.schema.json", &v);
    let h: Vec<u64> = v["terms"].as_array().unwrap().iter().map(|t| t["homology"].as_u64().unwrap()).collect();
    assert_eq!(h[0], 2);
    assert!(h[1..].iter().all(|&x| x == 0));
}

#[test]
fn hyperext_of_the_symmetrization() {
    let (v, code) = json(&["hyperext", "S^2 -> G^2", "G^2", "--c-start", "-1"]);
    assert_eq!(code, 0);
    validate("hyperext.schema.json", &v);
    assert_eq!(v["degeneration_page"], 2);
    let e2 = &v["pages"][1];
    assert_eq!(e2["page"], 2);
    let cells: Vec<(i64, i64, u64)> = e2["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["i"].as_i64().unwrap(), e["j"].as_i64().unwrap(), e["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(cells, [(2, 0, 1), (2, 1, 1)]);
}

#[test]
fn hyperext_rejects_ambiguous_arrows() {
    let (v, code) = json(&["hyperext", "I (*) I -> I (*) I", "G^2"]);
    assert_eq!(code, 2);
    validate("error.schema.json", &v);
}

#[test]
fn check_runs_a_suite() {
    let (v, code) = json(&["check", "yoneda", "--seed", "7"]);
    assert_eq!(code, 0);
    validate("check.schema.json", &v);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["suites"][0]["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn check_all_suites() {
    let (v, code) = json(&["check", "all"]);
    assert_eq!(code, 0);
    validate("check.schema.json", &v);
    assert_eq!(v["suites"].as_array().unwrap().len(), spf_core::suites::SUITES.len());
}

#[test]
fn unknown_suite_is_an_input_error() {
    let (_, code) = text(&["check", "nonesuch"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_exit_two() {
    let out = run(&["ext", "S^(", "I"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column"));
}

#[test]
fn guard_refuses_cleanly() {
    let (v, code) = json(&["ext", "S^4", "S^4", "--n", "9", "--guard-dim", "100"]);
    assert_eq!(code, 3);
    validate("error.schema.json", &v);
    assert!(v.get("dims").is_none());
}

#[test]
fn cache_dir_round_trip() {
    let dir = std::env::temp_dir().join(format!("spf-lab-cli-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let d = dir.to_str().unwrap();
    let (a, _) = json(&["ext", "S^2", "S^2", "--cache-dir", d]);
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let (b, _) = json(&["ext", "S^2", "S^2", "--cache-dir", d]);
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).unwrap();
}
