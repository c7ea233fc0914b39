use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetprod")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

#[test]
fn check_reports_the_saturation_witness() {
    let (v, code) = report(&["check", &fixture("fix-a.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["lower_saturated"], false);
    assert_eq!(v["results"]["witnesses"]["lower_saturated"], serde_json::json!(["3", "4"]));
    assert_eq!(v["inputs"].as_object().unwrap().len(), 1);
}

#[test]
fn hilbert_methods_agree() {
    let (v, code) = report(&["hilbert", &fixture("fix-b.json"), "--max-degree", "3", "--method", "presentation,limit,fvector,stanley"]);
    assert_eq!(code, 0);
    for m in ["presentation", "limit", "fvector", "stanley"] {
        assert_eq!(v["results"]["dims"][m], serde_json::json!([1, 2, 4, 6]), "{m}");
    }
    assert!(v["agreement"]["limit"]["stanley"].as_bool().unwrap());
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let out = run(&["check", "/nonexistent/poset.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"objects": ["*", "a"], "base": "*", "covers": [["a", "*"], ["*", "a"]]}"#).unwrap();
    assert_eq!(run(&["check", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_without_time_is_deterministic() {
    let args = ["--no-time", "tensor", &fixture("fix-a.json"), "--collection", "random", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("wall_time"));
}

#[test]
fn homology_of_circle_point_pairs() {
    let (v, code) = report(&["homology", &fixture("fix-e.json"), "--via", "colim,hocolim"]);
    assert_eq!(code, 0);
    for via in ["colim", "hocolim", "tensor"] {
        assert_eq!(v["results"]["dims"][via], serde_json::json!([1, 2, 0]), "{via}");
    }
}

#[test]
fn homology_reads_pair_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("interval.json");
    std::fs::write(
        &path,
        r#"{"dims": {"0": ["a", "b"], "1": ["e"]}, "faces": {"e": ["b", "a"]}, "sub": ["a", "b"]}"#,
    )
    .unwrap();
    let (v, code) = report(&["homology", &fixture("fix-e.json"), "--pair", path.to_str().unwrap(), "--via", "colim,hocolim"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["dims"]["colim"], v["results"]["dims"]["hocolim"]);
    assert_eq!(v["inputs"].as_object().unwrap().len(), 2);
}

#[test]
fn limits_of_a_constant_diagram() {
    let (v, code) = report(&["limits", &fixture("diagram-constant.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["lim"], serde_json::json!([[1], [0], [0]]));
}

#[test]
fn suite_runs_a_single_criterion() {
    let (v, code) = report(&["suite", "--only", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["criteria"].as_object().unwrap().len(), 1);
}

#[test]
fn unknown_criterion_is_a_usage_error() {
    assert_eq!(run(&["suite", "--only", "42"]).status.code(), Some(2));
}
