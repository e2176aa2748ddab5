//! End-to-end runs of the qmkit binary against the shipped scenario files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qmkit"))
}

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

#[test]
fn list_demos_names_every_demo() {
    let output = bin().arg("list-demos").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    for name in [
        "sec6-counterexample",
        "sec6-independent",
        "coin",
        "singlet-srf",
        "chsh",
        "luders",
        "no-signaling",
        "mixture",
    ] {
        assert!(stdout.contains(name), "missing demo {name}");
    }
}

#[test]
fn unknown_demo_exits_2() {
    let output = bin().args(["demo", "does-not-exist"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn counterexample_scenario_file_exits_1_with_split_verdict() {
    let output = bin()
        .args(["check"])
        .arg(scenario_path("sec6_counterexample.json"))
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["overall_pass"], serde_json::json!(false));
    let checks = report["checks"].as_array().unwrap();
    let by_name = |n: &str| {
        checks
            .iter()
            .find(|c| c["name"] == serde_json::json!(n))
            .unwrap_or_else(|| panic!("missing check {n}"))
    };
    assert_eq!(by_name("noeffect")["pass"], serde_json::json!(true));
    assert_eq!(by_name("prodmarg")["pass"], serde_json::json!(false));
    assert_eq!(by_name("jmf_form")["pass"], serde_json::json!(false));
    // the equivalence verdict still holds on the counterexample
    assert_eq!(by_name("equivalence")["pass"], serde_json::json!(true));
}

#[test]
fn singlet_scenario_file_exits_0() {
    let output = bin()
        .args(["check"])
        .arg(scenario_path("singlet_z_checks.json"))
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn missing_input_exits_2() {
    let dir = std::env::temp_dir().join("qmkit_cli_missing_input.json");
    std::fs::write(
        &dir,
        r#"{"version": 1, "dims": {"dim_s": 2, "dim_p": 2}, "checks": ["prodmarg"]}"#,
    )
    .unwrap();
    let output = bin().arg("check").arg(&dir).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("prodmarg"), "stderr: {stderr}");
}

#[test]
fn tol_override_reaches_the_checks() {
    // an absurdly large tolerance makes even the counterexample pass
    let output = bin()
        .args(["check"])
        .arg(scenario_path("sec6_counterexample.json"))
        .args(["--tol", "10", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["overall_pass"], serde_json::json!(true));
}

#[test]
fn demo_seed_changes_instances_but_not_verdict() {
    for seed in ["1", "2"] {
        let output = bin()
            .args(["demo", "mixture", "--seed", seed, "--format", "json"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert_eq!(report["pattern_matched"], serde_json::json!(true));
    }
}
