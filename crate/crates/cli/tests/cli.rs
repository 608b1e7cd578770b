//! End-to-end tests of the `goldman` binary: exit codes, JSON shapes, and
//! byte-for-byte determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goldman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

#[test]
fn expand_at_low_order_needs_no_corrections() {
    let out = run(&["expand", "--genus", "1", "--degree", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(
        v["log_values"]["a1"]["terms"],
        serde_json::json!([{"coeff": "1", "word": ["A1"]}])
    );
    assert_eq!(
        v["log_values"]["b1"]["terms"],
        serde_json::json!([{"coeff": "1", "word": ["B1"]}])
    );
}

#[test]
fn verify_suite_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "expansion", "--genus", "1", "--degree", "4"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "byte-identical reports");
    let v = stdout_json(&first);
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "expansion");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = run(&["verify", "--suite", "nosuch", "--genus", "1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn invalid_surface_is_a_config_error() {
    let out = run(&["expand", "--genus", "0", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn unsupported_format_is_a_config_error() {
    let out = run(&["expand", "--genus", "1", "--degree", "3", "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn twist_comparisons_pass_for_a_simple_loop() {
    let out = run(&["twist", "--word", "a1", "--k", "2", "--genus", "1", "--degree", "6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["tau1_closed_form", "tau2_closed_form"]);
    assert!(!v["taus"]["tau2"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn twist_along_a_square_satisfies_the_power_relation() {
    let out = run(&["twist", "--word", "a1^2", "--k", "1", "--genus", "1", "--degree", "5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let power = v["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "power_relation")
        .expect("power relation reported");
    assert_eq!(power["pass"], true);
}

#[test]
fn twist_along_a_separating_loop_has_trivial_first_invariant() {
    let out = run(&["twist", "--word", "[a1,b1]", "--k", "1", "--genus", "2", "--degree", "6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["taus"]["tau1"]["terms"], serde_json::json!([]));
    assert_eq!(v["pass"], true);
}

#[test]
fn malformed_word_is_a_config_error() {
    let out = run(&["twist", "--word", "[a1,b1", "--genus", "1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["twist", "--word", "q7", "--genus", "1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // well-formed but out of range for the surface
    let out = run(&["twist", "--word", "a2", "--genus", "1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bracket_agrees_with_the_surgery_formula() {
    let out = run(&["bracket", "--left", "a1", "--right", "b1", "--genus", "1", "--degree", "4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["surgery_agreement"], true);
    assert!(!v["bracket"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn cobracket_is_co_antisymmetric() {
    let out = run(&["cobracket", "--word", "a1 b1 a1", "--genus", "1", "--degree", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["co_antisymmetry"], true);
}

#[test]
fn trace_reports_dimension_rank_and_identity() {
    let out = run(&["trace", "--k", "3", "--genus", "2", "--degree", "5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["kernel_dimension"], 36);
    assert_eq!(v["trace_rank"], 20);
    assert_eq!(v["cobracket_identity"], true);
}

#[test]
fn chord_bracket_intertwines_with_the_tensor_map() {
    let out = run(&[
        "chord",
        "--pairs",
        "[[1,3],[2,4]]",
        "--pairs2",
        "[[1,2]]",
        "--genus",
        "1",
        "--degree",
        "6",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["tensor_intertwining"], true);
    assert_eq!(v["bracket"]["m"], 2);
}

#[test]
fn homgoldman_brackets_basis_classes() {
    let out = run(&["homgoldman", "--genus", "1", "--left", "[1,0]", "--right", "[0,1]"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(
        v["bracket"]["terms"],
        serde_json::json!([{"coeff": "1", "vec": [1, 1]}])
    );
    assert_eq!(v["bracket_in_commutator_ideal"], true);
    assert_eq!(v["left_central"], false);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = std::env::temp_dir().join("goldman-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("expand.json");
    let to_stdout = run(&["expand", "--genus", "1", "--degree", "3"]);
    let to_file = run(&[
        "expand",
        "--genus",
        "1",
        "--degree",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, to_stdout.stdout);
}
