use std::path::Path;
use std::process::{Command, Output};

use paracanonical::cup_model::build_ample_divisor_canonical;
use paracanonical::lift::fixtures;
use paracanonical::sampling;
use paracanonical::strata::SkewFamily;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paracanonical"))
        .args(args)
        .env_remove("PARACANONICAL_SEED")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--output", "json"];
    full.extend(args);
    let out = run(&full);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn cover_builtin_has_negative_gap() {
    let (code, v) = json(&["ledger", "--builtin", "chen-hacon-cover", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["invariants"]["gap"], -1);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn ample_divisor_example_in_text() {
    let out = run(&["examples", "--builtin", "ample-divisor", "--q", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("p_g = χ+q−1"));
    assert!(text.contains("verdict"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"n\": 3, \"h\": [1, 2");
    let out = run(&["ledger", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out) + &String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("line 1 column"), "{text}");
}

#[test]
fn missing_source_is_a_usage_error() {
    assert_eq!(run(&["ledger"]).status.code(), Some(1));
    assert_eq!(run(&["lift", "--builtin", "nonsense"]).status.code(), Some(1));
}

#[test]
fn json_output_is_byte_stable() {
    let args = ["--output", "json", "--seed", "11", "transversality", "--builtin", "ample-divisor", "--q", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn env_seed_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_paracanonical"))
        .args(["--output", "json", "--seed", "3", "pfaffian", "--builtin", "random", "--q", "4"])
        .env("PARACANONICAL_SEED", "99")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 99);
}

#[test]
fn lift_exit_codes() {
    assert_eq!(json(&["lift", "--builtin", "obstructed-order-2"]).0, 3);
    assert_eq!(json(&["lift", "--builtin", "obstructed-order-3"]).0, 3);
    assert_eq!(json(&["lift", "--builtin", "no-first-order"]).0, 3);
    assert_eq!(json(&["lift", "--builtin", "d1-zero"]).0, 2);
    let (code, v) = json(&["lift", "--builtin", "two-generator"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lift"]["order_achieved"], 6);
}

#[test]
fn small_sweeps_have_no_counterexamples() {
    for (n, h) in [("2", "6"), ("1", "3")] {
        let (code, v) = json(&["sweep", "--max-n", n, "--max-h", h]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["counterexamples"].as_array().unwrap().len(), 0);
    }
    assert_eq!(run(&["sweep", "--max-n", "9"]).status.code(), Some(1));
}

#[test]
fn input_files_for_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = write(dir.path(), "ledger.json", r#"{"n": 3, "h": [1, 4, 3, 2]}"#);
    let (code, v) = json(&["ledger", "--input", &ledger]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exorbitant_verdict"], "out_of_hypotheses");
    let flagged = r#"{"n": 3, "h": [1, 4, 3, 2], "flags": {"no_agt_fibration": true, "isolated_zero": true}}"#;
    let ledger = write(dir.path(), "flagged.json", flagged);
    assert_eq!(json(&["ledger", "--input", &ledger]).1["result"]["exorbitant_verdict"], "exorbitant");

    let model = build_ample_divisor_canonical(3, 2).unwrap().descriptor();
    let model = write(dir.path(), "model.json", &serde_json::to_string(&model).unwrap());
    let (code, v) = json(&["transversality", "--input", &model]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["incidence"]["dim_i_main"], 3);

    let mut rng = sampling::rng(5);
    let family = SkewFamily::new(4, (0..2).map(|_| sampling::skew_matrix(&mut rng, 4, 3)).collect()).unwrap();
    let family = write(dir.path(), "family.json", &serde_json::to_string(&family.to_file()).unwrap());
    let (code, v) = json(&["pfaffian", "--input", &family]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sigma"]["degree"], 2);

    let lift = write(dir.path(), "lift.json", &fixtures::elliptic(4, paracanonical::GaussianRational::from_integer(1)).to_json());
    let (code, v) = json(&["--order", "4", "lift", "--input", &lift]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lift"]["tails"][2][0], "1/3");
}

#[test]
fn flags_are_embedded_in_reports() {
    let (_, v) = json(&["--samples", "17", "--seed", "4", "ledger", "--builtin", "genus2-product", "--n", "3", "--isolated-zero"]);
    assert_eq!(v["config"]["sample_count"], 17);
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["config"]["subcommand"]["isolated_zero"], true);
    assert_eq!(v["result"]["flags"]["isolated_zero"], true);
}
