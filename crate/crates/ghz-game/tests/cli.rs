//! End-to-end checks of the `ghz-game` binary.

use std::process::{Command, Output};

fn ghz_game(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghz-game"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn exercise1_reports_the_conclusion() {
    let output = ghz_game(&["exercise1"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("max simultaneously satisfiable = 3"), "{text}");
    assert!(text.contains("colorings satisfying all four statements: 0"));
}

#[test]
fn exercise1_json_report() {
    let output = ghz_game(&["exercise1", "--report", "json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["enumeration"]["max_satisfied"], 3);
    assert_eq!(report["enumeration"]["satisfying_all_four"], 0);
    assert_eq!(report["product_argument"]["joint_product"], 1);
    assert_eq!(report["product_argument"]["required_product"], -1);
    assert_eq!(report["product_argument"]["contradiction"], true);
}

#[test]
fn exercise2_covers_every_guard() {
    let output = ghz_game(&["exercise2", "--report", "json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    for row in report["ambiguity_cover"].as_array().unwrap() {
        assert_eq!(row["cover"], serde_json::json!([1, 2, 3, 4]));
    }
    for row in report["testability"].as_array().unwrap() {
        assert_eq!(row["testable"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn oracle_reports_three_quarters() {
    let output = ghz_game(&["oracle"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("optimal classical value = 3/4"), "{text}");

    let output = ghz_game(&["oracle", "--report", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["value"]["best_passed"], 3);
    assert_eq!(report["value"]["total_tests"], 4);
}

#[test]
fn play_quantum_always_passes() {
    let output = ghz_game(&[
        "play", "--strategy", "quantum", "--trials", "500", "--guard", "uniform", "--seed", "7",
        "--report", "json",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["pass_rate"], 1.0);
    assert_eq!(report["stats"]["completed"], 500);
    assert_eq!(report["stats"]["aborted"], 0);
}

#[test]
fn play_is_deterministic_per_seed() {
    let run = || {
        let output = ghz_game(&[
            "play", "--trials", "300", "--guard", "4", "--seed", "11", "--report", "json",
        ]);
        assert!(output.status.success());
        stdout(&output)
    };
    assert_eq!(run(), run());
}

#[test]
fn play_classical_spec_is_accepted() {
    let output = ghz_game(&[
        "play", "--strategy", "classical:RRRRRR", "--trials", "400", "--guard", "uniform",
        "--seed", "3", "--report", "json",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    // All-red passes guards 1-3 and always fails guard 4.
    assert_eq!(report["stats"]["per_guard"][3]["passes"], 0);
    let completed = report["stats"]["completed"].as_u64().unwrap();
    let g4 = report["stats"]["per_guard"][3]["trials"].as_u64().unwrap();
    let passes = report["stats"]["passes"].as_u64().unwrap();
    assert_eq!(passes, completed - g4);
}

#[test]
fn bad_flags_are_usage_errors() {
    for args in [
        &["play", "--strategy", "telepathy"][..],
        &["play", "--guard", "5"],
        &["play", "--strategy", "classical:RGB"],
        &["serve", "agent", "--suspect", "D"],
        &["summon"],
    ] {
        let output = ghz_game(args);
        assert_eq!(output.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn zero_trials_is_a_runtime_error() {
    let output = ghz_game(&["play", "--trials", "0"]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("trials must be at least 1"), "{err}");
}

#[test]
fn distributed_play_requires_endpoints() {
    // Without endpoints the referee cannot even name its peers.
    let output = ghz_game(&["play", "--mode", "distributed", "--timeout-ms", "200"]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("missing endpoint"), "{err}");
}

#[test]
fn endpoint_env_variables_are_honored() {
    // With endpoints supplied via the environment, the failure moves past
    // configuration to the (dead) transport.
    let output = Command::new(env!("CARGO_BIN_EXE_ghz-game"))
        .args(["play", "--mode", "distributed", "--timeout-ms", "200"])
        .env("GHZ_GAME_ENDPOINT_DEVICE", "127.0.0.1:9")
        .env("GHZ_GAME_ENDPOINT_AGENT_A", "127.0.0.1:10")
        .env("GHZ_GAME_ENDPOINT_AGENT_B", "127.0.0.1:11")
        .env("GHZ_GAME_ENDPOINT_AGENT_C", "127.0.0.1:12")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(!err.contains("missing endpoint"), "{err}");
}
