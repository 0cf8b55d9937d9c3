use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn jtrace(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_jtrace")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let v: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    // every output re-parses to the same value
    assert_eq!(serde_json::from_str::<Value>(&v.to_string()).unwrap(), v);
    (out.status.code().expect("exit code"), v)
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn example_513_under_mirror_reduction() {
    let p = data("ex513.json");
    let (code, v) = jtrace(&["trbar", "--g", "2", "--input", p.to_str().unwrap(), "--reduce", "mir"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"degree": 3, "torsion": [["a1", "a1", "a2"], ["a1", "a2", "a2"]], "zero": false}));
}

#[test]
fn example_512_vanishes() {
    let p = data("ex512.json");
    let (code, v) = jtrace(&["trbar", "--g", "2", "--input", p.to_str().unwrap(), "--reduce", "none"]);
    assert_eq!(code, 0);
    assert_eq!(v["zero"], json!(true));
    assert_eq!(v["representative"], json!([]));
}

#[test]
fn example_514_exact_representative() {
    let p = data("ex514.json");
    let (code, v) = jtrace(&["trbar", "--g", "3", "--input", p.to_str().unwrap(), "--reduce", "none"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["representative"],
        json!([
            {"coeff": "-1", "word": ["a2", "a2", "a3"]},
            {"coeff": "-1", "word": ["a2", "a3", "a3"]},
        ])
    );
}

#[test]
fn counts_with_enumeration() {
    let (code, v) = jtrace(&["counts", "--k", "3", "--n", "2", "--brute-check"]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        json!({"necklaces": 4, "bracelets": 4, "chiral": 4, "b_free_rank": 0, "b_torsion_rank": 4, "brute_agrees": true})
    );
}

#[test]
fn example_412_direct_route_is_nonzero() {
    let p = data("ex412.aut");
    let (code, v) =
        jtrace(&["trbar-direct", "--g", "2", "--degree", "2", "--aut", p.to_str().unwrap(), "--reduce", "cbar"]);
    assert_eq!(code, 0);
    assert_eq!(v["zero"], json!(false));
    assert_eq!(v["degree"], json!(3));
}

#[test]
fn trace_of_a_tripod() {
    let f = temp(r#"{"tree": [["a1", "a2"], "b2"]}"#);
    let (code, v) = jtrace(&["trace", "--g", "2", "--input", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], json!(1));
    assert_eq!(v["zero"], json!(false));
}

#[test]
fn witness_and_golden_suite() {
    let (code, v) = jtrace(&["witness", "--k", "1", "--g", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["tr_mir_nonzero"], json!(true));
    let (code, v) = jtrace(&["verify-paper"]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], json!(0));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["anchor"].is_string()));
}

#[test]
fn precondition_failures_exit_two() {
    let f = temp(r#"{"tree": [["a1", "b1"], [["a1", "a2"], "a1"]]}"#);
    let (code, v) = jtrace(&["trbar", "--g", "3", "--input", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("not_trace_free"));
    let (code, v) = jtrace(&["witness", "--k", "2", "--g", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("genus_too_small"));
}

#[test]
fn malformed_input_exits_three() {
    let f = temp(r#"{"tree": [["a1", "b1"],"#);
    let (code, v) = jtrace(&["trbar", "--g", "2", "--input", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], json!("parse"));
    let f = temp(r#"{"half": true, "tree": [["a1", "b1"], ["a1", "a2"]]}"#);
    let (code, _) = jtrace(&["trbar", "--g", "2", "--input", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    let f = temp("[K a1 a1]");
    let (code, _) = jtrace(&["trbar-direct", "--g", "2", "--degree", "1", "--aut", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    let (code, v) = jtrace(&["counts", "--k", "x", "--n", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], json!("usage"));
}

#[test]
fn reports_are_deterministic() {
    let p = data("ex513.json");
    let args = ["--report", "trbar", "--g", "2", "--input", p.to_str().unwrap()];
    let (_, first) = jtrace(&args);
    let (_, second) = jtrace(&args);
    assert_eq!(first, second);
    assert_eq!(first["inputs_sha256"].as_str().unwrap().len(), 64);
    assert!(first["certifications"].as_array().unwrap().iter().all(|c| c["passed"] == json!(true)));
}
