use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn qlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qlab"));
    cmd.current_dir(root()).args(args).env_remove("QLAB_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run qlab")
}

fn qlab(args: &[&str]) -> Output {
    qlab_env(args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn validate_quantaloid_succeeds() {
    let o = qlab(&["validate", "instances/q2.qt"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("q2"));
}

#[test]
fn zero_category_is_not_conically_cocomplete() {
    let o = qlab(&["report", "instances/zero_qrel3.qc"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("conically_cocomplete: false"), "{text}");
    assert!(text.contains("order_cocomplete: true"), "{text}");

    let o = qlab(&["--json", "report", "instances/zero_qrel3.qc"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["flags"]["conically_cocomplete"], false);
    assert_eq!(v["flags"]["order_cocomplete"], true);
}

#[test]
fn tensor_with_zero_is_bottom() {
    let o = qlab(&["tensor", "instances/chain3_q2.qc", "--object", "m", "--arrow", "*->*:0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with(": bot"), "{}", stdout(&o));
}

#[test]
fn cotensor_and_supremum() {
    let o = qlab(&["cotensor", "instances/chain3_q2.qc", "--arrow", "*->*:0", "--object", "m"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with(": top"));
    let o = qlab(&["conical", "instances/chain3_q2.qc", "--family", "bot,m", "--type", "*", "--supremum"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with(": m"));
}

#[test]
fn missing_tensor_exits_one() {
    let o = qlab(&["tensor", "instances/zero_qrel3.qc", "--object", "z0", "--arrow", "u->0:0"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn adjoint_outcomes() {
    let o = qlab(&["adjoint", "instances/const_bot.qf"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("map bot -> top"));
    let o = qlab(&["adjoint", "instances/lift_bot.qf"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("TensorsNotPreserved"));
}

#[test]
fn conversions_round_trip() {
    let o = qlab(&["roundtrip", "instances/chain3_q2.qc"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("isomorphic"));
    let o = qlab(&["to-category", "instances/chain3_q2.qp"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("category "));
    let o = qlab(&["to-module", "instances/chain3_q2.qc"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("module "));
}

#[test]
fn bundled_names_resolve_without_a_path() {
    let o = qlab(&["validate", "chain3_q2.qc"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["validate", "instances/no_such_file.qc"][..],
        &["validate", "counterexamples/non_closed.qp"],
        &["tensor", "instances/chain3_q2.qc", "--object", "zz", "--arrow", "*->*:0"],
        &["frobnicate"],
        &[],
    ] {
        let o = qlab(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
    let o = qlab(&["validate", "counterexamples/broken_assoc.qt"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotAssociative"));
}

#[test]
fn cap_variable_is_honoured() {
    let o = qlab_env(&["report", "instances/p1_qrel3.qc"], &[("QLAB_CAP", "1")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("EnumerationCapExceeded"));
    let o = qlab_env(&["report", "instances/p1_qrel3.qc"], &[("QLAB_CAP", "many")]);
    assert_eq!(code(&o), 2);
    let o = qlab_env(&["report", "instances/p1_qrel3.qc"], &[("QLAB_CAP", "100000")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn suite_over_bundled_instances_passes() {
    let o = qlab(&["suite", "instances"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = qlab(&["suite", "--max-objects", "0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn suite_json_records_are_sorted_and_complete() {
    let o = qlab(&["--json", "--sequential", "suite", "--max-objects", "0"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = v.as_array().unwrap();
    assert!(!records.is_empty());
    let keys: Vec<(String, String)> = records
        .iter()
        .map(|r| {
            let fields: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
            assert_eq!(fields, ["check", "instance", "status", "witness"]);
            (r["instance"].as_str().unwrap().to_string(), r["check"].as_str().unwrap().to_string())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let parallel = qlab(&["--json", "suite", "--max-objects", "0"]);
    assert_eq!(parallel.stdout, o.stdout);
}

#[test]
fn suite_over_counterexamples_fails() {
    let o = qlab(&["--json", "suite", "counterexamples", "--max-objects", "0"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed_validations = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["check"] == "validate" && r["status"] == "fail")
        .count();
    assert!(failed_validations >= 5);
}
