use std::process::{Command, Output};

use gct::hwv::{verify_certificate, EvalCertificate};
use gct::obstructions::ObstructionReport;
use gct::tensors::strassen_decomposition;
use serde_json::Value;

fn gct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gct"))
        .args(args)
        .env_remove("GCT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn kron_prints_the_coefficient() {
    let o = gct(&["kron", "--lambda", "2,2,2,2", "--mu", "4,4", "--nu", "4,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn integers_are_json_strings() {
    let o = gct(&["kron", "--lambda", "2,2,2,2", "--mu", "4,4", "--nu", "4,4", "--output", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({ "g": "1" }));
}

#[test]
fn staircase_example() {
    let o = gct(&["staircase", "--m", "3", "--d", "6"]);
    assert_eq!(stdout(&o).trim(), "3,2,1");
}

#[test]
fn usage_errors_exit_two() {
    let o = gct(&["kron", "--lambda", "2", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let bad_input = gct(&["kron", "--lambda", "2", "--mu", "1,1", "--nu", "3"]);
    assert_eq!(bad_input.status.code(), Some(2));
    assert!(stdout(&bad_input).is_empty());
}

#[test]
fn invdim_lists_the_two_alphas() {
    let o = gct(&["invdim", "unit", "--weight", "2^4;2^4;5,1^3", "--m", "5", "--terms", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], "0");
    let alphas: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["alpha"].as_str().unwrap()).collect();
    assert_eq!(alphas.len(), 2);
    assert!(alphas.contains(&"2,2,2,2") && alphas.contains(&"2,2,2,1,1"));
}

#[test]
fn lemma61_pipeline_concludes() {
    let o = gct(&["obstruct", "lemma61", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("R̲ > 5"));
    assert!(err.trim_end().ends_with("R̲(⟨2,2,2⟩) > 5"));

    let report: ObstructionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.not_in_so);
    assert_eq!(report.conclusion.as_deref(), Some("R̲(w) > 5"));
    let cert = report.membership.unwrap();
    assert!(verify_certificate(&cert, &strassen_decomposition().unwrap()).unwrap());

    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v["membership"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["weight", "perms", "g", "value", "tensor_digest"]);
}

#[test]
fn output_does_not_depend_on_threads() {
    let one = gct(&["--threads", "1", "obstruct", "lemma61", "--n", "2", "--seed", "7"]);
    let three = Command::new(env!("CARGO_BIN_EXE_gct"))
        .args(["obstruct", "lemma61", "--n", "2", "--seed", "7"])
        .env("GCT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn inconclusive_search_exits_one() {
    // ((1,1),(1,1),(1,1)) has Kronecker coefficient 0, so no certificate exists
    let o = gct(&["hwv", "certify", "--weight", "1,1;1,1;1,1", "--tensor", "unit:2", "--trials", "4", "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({ "certificate": null }));
}

#[test]
fn certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = gct(&["hwv", "certify", "--weight", "2,2;2,2;2,2", "--tensor", "unit:2", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: EvalCertificate = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_string_pretty(&cert).unwrap().trim(), stdout(&o).trim());
    std::fs::write(&path, stdout(&o)).unwrap();
    let v = gct(&["hwv", "verify", "--certificate", path.to_str().unwrap(), "--tensor", "unit:2"]);
    assert_eq!(stdout(&v).trim(), "true");
    let wrong = gct(&["hwv", "verify", "--certificate", path.to_str().unwrap(), "--tensor", "unit:3"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn emitted_tensors_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strassen.txt");
    let o = gct(&["tensor", "emit", "strassen", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&o));
    let e = gct(&["hwv", "eval", "--weight", "1;1;1", "--perms", "();();()", "--tensor", path.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(0));
    let named = gct(&["hwv", "eval", "--weight", "1;1;1", "--perms", "();();()", "--tensor", "matmul:2,2,2"]);
    assert_eq!(stdout(&e), stdout(&named));
}

#[test]
fn polytope_membership_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    let o = gct(&["polytope", "kron-gens", "--format", "2,2,2", "--max-degree", "4", "-o", gens.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let inside = dir.path().join("u.json");
    std::fs::write(&inside, r#"{"blocks":[["1/2","1/2"],["1/2","1/2"],["1/2","1/2"]]}"#).unwrap();
    let m = gct(&["polytope", "member", "--point", inside.to_str().unwrap(), "--gens", gens.to_str().unwrap(), "--output", "json"]);
    let v: Value = serde_json::from_str(&stdout(&m)).unwrap();
    assert_eq!(v["member"], true);

    let outside = dir.path().join("v.json");
    std::fs::write(&outside, r#"{"blocks":[["1","0"],["1","0"],["1/2","1/2"]]}"#).unwrap();
    let m = gct(&["polytope", "member", "--point", outside.to_str().unwrap(), "--gens", gens.to_str().unwrap(), "--output", "json"]);
    let v: Value = serde_json::from_str(&stdout(&m)).unwrap();
    assert_eq!(v["member"], false);
}

#[test]
fn degree_guard_refuses_large_weights() {
    let o = gct(&["--degree-limit", "4", "kron", "--lambda", "5", "--mu", "5", "--nu", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degree-limit"));
}
