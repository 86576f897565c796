use std::process::Command;

use serde_json::Value;

fn qschur(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qschur")).args(args).env_remove("QSCHUR_CACHE_DIR").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = qschur(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")))
}

#[test]
fn dim_check_small() {
    let (code, v) = json(&["dim-check", "--m", "2", "--d", "1", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({"dim_C": 64, "sum_squares": 64, "match": true}));
}

#[test]
fn dim_check_generic_agrees() {
    let (code, v) = json(&["dim-check", "--m", "1", "--d", "1", "--q", "3", "--method", "generic"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim_C"], 36);
}

#[test]
fn pi_at_zero_is_trivial() {
    let (code, v) = json(&["pi", "--type", "D", "--m", "2", "--d", "0"]);
    assert_eq!(code, 0);
    let pi = v["pi"].as_array().unwrap();
    assert_eq!(pi.len(), 1);
    assert_eq!(pi[0]["lambda"], serde_json::json!([0, 0, 0, 0]));
    assert_eq!(pi[0]["dim"], "1");
    assert_eq!(v["schur_dimension"], "1");
}

#[test]
fn clean_relations_then_perturbed() {
    let (code, v) = json(&["check-relations", "--m", "1", "--d", "1", "--q", "2"]);
    assert_eq!(code, 0);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["instances_checked"].as_u64().unwrap() > 0);

    let (code, v) = json(&["check-relations", "--m", "1", "--d", "1", "--q", "2", "--perturb", "E:j1"]);
    assert_eq!(code, 1);
    let viol = v["violations"].as_array().unwrap();
    assert!(!viol.is_empty());
    assert!(viol[0]["family"].is_string());
}

#[test]
fn enumerate_and_count_agree() {
    let (code, v) = json(&["enumerate", "--m", "1", "--d", "2", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["match"], true);
    let flags = v["flags"].as_u64().unwrap();
    let (code, c) = json(&["count", "--m", "1", "--d", "2", "--q", "2", "--enumerate"]);
    assert_eq!(code, 0);
    assert_eq!(c["total"], flags.to_string());
    assert_eq!(c["enumerated_total"], flags.to_string());
}

#[test]
fn strata_csv_header() {
    let (code, out) = qschur(&["strata", "--m", "1", "--d", "1", "--primes", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "nu,c,dim_X,fiber_dim,dim_Y,count_polynomial");
    assert!(out.lines().count() > 1);
}

#[test]
fn type_a_baseline_matches_matrix_count() {
    let (code, v) = json(&["typeA-baseline", "--n", "2", "--d", "2", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim_closure"], 10);
    assert_eq!(v["matrix_count"], 10);
}

#[test]
fn usage_and_resource_errors() {
    assert_eq!(qschur(&["enumerate", "--m", "1", "--d", "1", "--q", "6"]).0, 2);
    assert_eq!(qschur(&["pi", "--type", "A", "--m", "2", "--d", "1"]).0, 2);
    assert_eq!(qschur(&["enumerate", "--m", "2", "--d", "2", "--q", "3", "--max-flags", "5"]).0, 2);
    assert_eq!(qschur(&["dim-check", "--m", "2", "--d", "1", "--q", "2", "--method", "generic", "--max-basis", "3"]).0, 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let (code, stdout) = qschur(&["weight-check", "--m", "1", "--d", "1", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn cache_dir_from_env_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qschur"))
            .args(["dim-check", "--m", "1", "--d", "1", "--q", "2"])
            .env("QSCHUR_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let cached = dir.path().join("dimcheck-graded-D-m1-d1-q2-v1.json");
    assert!(cached.exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);

    // A tampered cache entry is served as-is, so the file really is read.
    std::fs::write(&cached, r#"{"dim_C":35,"sum_squares":36,"match":false}"#).unwrap();
    let third = run();
    assert_eq!(third.status.code(), Some(1));
}
