use std::process::{Command, Output};

use serde_json::Value;

fn lwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lwc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn encode_flip4_with_one_stuck_cell() {
    let out = lwc(&["encode", "--code", "flip4", "--msg", "101", "--state", "*1**"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["word"], "0101");
    assert_eq!(v["report"]["write_cost"], 1);
    assert_eq!(v["report"]["minimal"], true);

    let dec = json(&lwc(&["decode", "--code", "flip4", "--word", "0101"]));
    assert_eq!(dec["message"], "101");
}

#[test]
fn update_then_decode() {
    let v = json(&lwc(&["update", "--code", "hamming7-lwc", "--prev", "0000000", "--msg", "1000", "--state", "******0"]));
    let word = v["word"].as_str().unwrap().to_owned();
    assert_eq!(&word[6..], "0");
    assert!(v["report"]["rewrite_cost"].as_u64().unwrap() <= 3);
    let dec = json(&lwc(&["decode", "--code", "hamming7-lwc", "--word", &word]));
    assert_eq!(dec["message"], "1000");
}

#[test]
fn analyze_hamming_lwc() {
    let v = json(&lwc(&["analyze", "--code", "hamming7-lwc"]));
    assert_eq!(v["d_star"], 3);
    assert_eq!(v["r_star"], 3);
    assert_eq!(v["optimal"], true);
}

#[test]
fn bounds_both_forms() {
    let v = json(&lwc(&["bounds", "--n", "7", "--k", "4", "--r", "3"]));
    assert_eq!(v["d_max"], 3);
    let v = json(&lwc(&["bounds", "--kuznetsov", "--n", "8", "--t", "1"]));
    assert_eq!(v["upper"], 7);
    assert!(v["lower"].as_u64().unwrap() <= 7);
}

#[test]
fn duality_and_repair() {
    let v = json(&lwc(&["duality", "--lrc", "hamming7"]));
    assert_eq!(v["identities_hold"], true);
    assert_eq!(v["lwc"]["d_star"], 3);

    // 1101000 is g(x) = 1 + x + x^3, a Hamming codeword.
    let v = json(&lwc(&["repair", "--code", "hamming7", "--word", "1101000", "--erased", "3"]));
    assert_eq!(v["value"], 1);
    assert_eq!(v["accessed"].as_array().unwrap().len(), 3);
}

#[test]
fn code_spec_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    std::fs::write(&path, r#"{"n": 6, "construction": {"type": "groupflip", "groups": 2}}"#).unwrap();
    let v = json(&lwc(&["analyze", "--code", path.to_str().unwrap()]));
    assert_eq!(v["r_star"], 2);
}

#[test]
fn simulate_writes_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    let csv = dir.path().join("out.csv");
    std::fs::write(&cfg, r#"{"code": "flip5", "beta": 0.1, "trials": 20, "updates_per_trial": 3, "seed": 1}"#).unwrap();
    let out = lwc(&["simulate", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["trials"], 20);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "trial,step,defect_state,cost,bound,minimal,cells_touched");
}

#[test]
fn masking_failure_exits_one_with_defects() {
    let out = lwc(&["encode", "--code", "flip4", "--msg", "000", "--state", "01**"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["masking_failure"]["defects"], serde_json::json!([0, 1]));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["encode", "--code", "flip4", "--msg", "10", "--state", ""][..],
        &["encode", "--code", "flip4", "--msg", "1x1"],
        &["analyze", "--code", "nosuchcode"],
        &["bounds", "--n", "7", "--k", "4", "--r", "0"],
    ] {
        let out = lwc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
