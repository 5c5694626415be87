//! End-to-end checks against the built binary and the bundled fixtures.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modalnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let uncontrollable = run(&["check", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(uncontrollable.status.code(), Some(1));
    assert!(stdout(&uncontrollable).starts_with("UNCONTROLLABLE:"));

    let controllable = run(&["check", fixture("example1_swapped.json").to_str().unwrap()]);
    assert_eq!(controllable.status.code(), Some(0));
    assert_eq!(stdout(&controllable).trim(), "CONTROLLABLE");

    let two_actuated = run(&["check", fixture("example3.json").to_str().unwrap()]);
    assert_eq!(two_actuated.status.code(), Some(0));
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["check", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

#[test]
fn defective_coupling_exits_two() {
    // A Jordan-block G is not diagonalizable; every command must refuse it.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{
            "n": 2,
            "m": 1,
            "N": 2,
            "A": [[0.0, 1.0], [0.0, 0.0]],
            "B": [[0.0], [1.0]],
            "C": [[1.0, 0.0]],
            "G": [[1.0, 1.0], [0.0, 1.0]],
            "actuated": [0, 1]
        }}"#
    )
    .unwrap();
    let out = run(&["check", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("diagonalizable"));
}

#[test]
fn analyze_json_is_versioned_and_stable() {
    let out = run(&[
        "analyze",
        fixture("example1.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema"], "modalnet/1");
    assert_eq!(value["verdict"]["status"], "uncontrollable");
    // Parsing and re-serializing must reproduce the emitted bytes exactly.
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), text.trim());
    // The run itself must be deterministic.
    let again = run(&[
        "analyze",
        fixture("example1.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn analyze_narrative_mentions_oracle_and_verdict() {
    let out = run(&["analyze", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("oracle: Kalman rank"));
    assert!(text.contains("verdict: UNCONTROLLABLE"));

    let skipped = run(&[
        "analyze",
        fixture("example1.json").to_str().unwrap(),
        "--no-oracle",
    ]);
    assert!(!stdout(&skipped).contains("oracle:"));
}

#[test]
fn modes_lists_invariant_mode() {
    let out = run(&["modes", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("network-invariant"));
    assert!(text.contains("mu=1.000000"));
}

#[test]
fn partition_subset_reports_bound() {
    let out = run(&[
        "partition",
        fixture("example1.json").to_str().unwrap(),
        "--subset",
        "1,2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema"], "modalnet/1");
    assert_eq!(value["checks"].as_array().unwrap().len(), 1);
    assert_eq!(value["checks"][0]["subset"], serde_json::json!([1, 2]));
}

#[test]
fn design_protocol_finds_gain() {
    let out = run(&[
        "design-protocol",
        fixture("example2_subsystem.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["passes"], true);
    assert_eq!(value["invariant_modes_after"].as_array().unwrap().len(), 0);
}

#[test]
fn oracle_rank_matches_known_deficiency() {
    let out = run(&[
        "oracle",
        fixture("example1.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["rank"], 7);
    assert_eq!(value["dimension"], 9);
    assert_eq!(value["controllable"], false);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "analyze",
        fixture("example3.json").to_str().unwrap(),
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["verdict"]["status"], "controllable");
}
