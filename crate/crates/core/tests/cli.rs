use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn kolchin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kolchin")).args(args).output().expect("spawn kolchin")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = kolchin(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn omega_report() {
    let out = kolchin(&["--json", "omega", "--m", "2", "--leaders", "(2,0)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.to_string(), r#"{"binomial_coeffs":[-1,2],"tau":1,"alpha":2,"threshold":2,"exact":true}"#);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let spec = data("example6.json");
    for args in [
        vec!["--json", "connected-component", "--spec", &spec, "--n", "2"],
        vec!["--json", "oracle", "--m", "3", "--leaders", "(1,1,0);(0,2,1)", "--s", "0..9"],
        vec!["compose", "--m", "2", "--define", "c=x1*x2", "c*d1", "d2^2 - x1"],
    ] {
        let a = kolchin(&args);
        let b = kolchin(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn oracle_table_agrees() {
    let (v, code) = json(&["oracle", "--m", "2", "--leaders", "(2,0)", "--s", "0..7"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["count"] == r["poly"]));
}

#[test]
fn connected_component_from_spec_file() {
    let (v, code) = json(&["connected-component", "--spec", &data("example6.json"), "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["killed"], serde_json::json!(["u12", "u123", "u23"]));
    assert_eq!(v["family"], "relative to coordinate-kill family");
    let (v, code) = json(&["connected-component", "--spec", &data("example6.json"), "--n", "2", "--mode", "literal"]);
    assert_eq!(code, 2);
    assert!(v["error"].is_string());
}

#[test]
fn group_check_exit_codes() {
    let spec = data("example6.json");
    let (v, code) = json(&["group-check", "--spec", &spec]);
    assert_eq!((code, v["closed"].as_bool()), (0, Some(true)));
    let (v, code) = json(&["group-check", "--spec", &spec, "--mode", "literal"]);
    assert_eq!((code, v["closed"].as_bool()), (1, Some(false)));
    assert_eq!(v["violations"][0]["pos"], serde_json::json!([1, 3]));
}

#[test]
fn heisenberg_commutator() {
    let (v, code) = json(&["commutator", "--spec", &data("heisenberg.json"), "--rename", "u=v"]);
    assert_eq!(code, 0);
    let rows = v["commutator"].as_array().unwrap();
    assert_eq!(rows[0], serde_json::json!(["1", "0", "u1*v2 - u2*v1"]));
    assert_eq!(rows[1], serde_json::json!(["0", "1", "0"]));
}

#[test]
fn verify_factorization_exit_codes() {
    let (v, code) = json(&["verify-factorization", "--m", "2", "--target", "d1^2 - d2^2", "d1 + d2", "d1 - d2"]);
    assert_eq!((code, v["verdict"]["result"].as_str()), (0, Some("match")));
    let (v, code) = json(&["verify-factorization", "--m", "2", "--target", "d1^2", "x1*d1", "d1"]);
    assert_eq!((code, v["verdict"]["result"].as_str()), (1, Some("mismatch")));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["leader", "--m", "2", "d0"][..],
        &["leader", "--m", "2", "d3"],
        &["leader", "--m", "2", "c2*d1"],
        &["leader", "--m", "2", "d1 +"],
        &["apply", "--m", "2", "d1", "1/0"],
        &["omega", "--m", "2", "--leaders", "(1,2,3)"],
        &["oracle", "--m", "2", "--s", "9..1"],
        &["group-check", "--spec", "/nonexistent.json"],
        &["no-such-command"],
        &["omega"],
    ] {
        let out = kolchin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} should explain itself on stderr");
    }
}

#[test]
fn text_output_is_rendered_from_json() {
    let out = kolchin(&["leader", "--m", "2", "d1^2 - d2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "leader: [2,0]\norder: 2\n");
}
