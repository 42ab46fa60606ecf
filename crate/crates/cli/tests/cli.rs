use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wreath_core::report::Report;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Runs `wreath` with a `--json` file and returns the exit code and report.
fn run(args: &[&str]) -> (i32, Option<Value>) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_wreath"))
        .args(args)
        .arg("--json")
        .arg(&path)
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let report = std::fs::read_to_string(&path).ok().map(|t| serde_json::from_str(&t).unwrap());
    (code, report)
}

fn results(r: &Value) -> &Value {
    &r["results"]
}

#[test]
fn counterexample_over_z_mod_m() {
    let (code, r) = run(&["verify-counterexample", "--m", "2", "--ring", "Zm"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(results(&r)["left_inverse"], true);
    assert_eq!(results(&r)["right_inverse"], false);
    assert_eq!(results(&r)["kernel_witness_nontrivial"], true);
    assert_eq!(r["verdicts"]["hopfian"]["value"], false);
    assert!(!r["verdicts"]["hopfian"]["licensed_by"].as_array().unwrap().is_empty());
}

#[test]
fn counterexample_over_q() {
    let (code, r) = run(&["verify-counterexample", "--m", "3", "--ring", "Q"]);
    assert_eq!(code, 0);
    assert_eq!(results(&r.unwrap())["beta_alpha_support"], 4);
}

#[test]
fn invalid_counterexample_flags() {
    assert_eq!(run(&["verify-counterexample", "--m", "1"]).0, 2);
    assert_eq!(run(&["verify-counterexample", "--m", "3", "--ring", "R"]).0, 2);
    assert_eq!(run(&["verify-counterexample"]).0, 2);
}

#[test]
fn analyze_s3_natural_mod_3() {
    let (code, r) = run(&["finite", "analyze", "--group", &data("s3_natural.txt"), "--coeff", "3"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    let res = results(&r);
    assert_eq!(res["end_dim_p3"], 2);
    assert_eq!(res["h1_size"], 1);
    assert_eq!(res["aut_formula"], 324);
    assert_eq!(res["aut_brute"], 324);
    assert_eq!(res["out_formula"], res["out_brute"]);
    let conditions: Vec<&str> = r["hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["condition"].as_str().unwrap())
        .collect();
    assert_eq!(conditions, ["1", "2", "3", "4"]);
    assert_eq!(r["verdicts"]["hopfian"]["value"], true);
}

#[test]
fn empty_generator_list_is_an_input_error() {
    let (code, r) = run(&["finite", "analyze", "--group", &data("no_generators.txt"), "--coeff", "3"]);
    assert_eq!(code, 2);
    assert!(r.is_none());
    assert_eq!(run(&["finite", "h1", "--group", "no-such-file", "--coeff", "3"]).0, 2);
    assert_eq!(run(&["finite", "h1", "--group", "S3-natural", "--coeff", "x"]).0, 2);
}

#[test]
fn bound_exceeded_keeps_formula() {
    let (code, r) = run(&["finite", "aut", "--group", "S3-natural", "--coeff", "3", "--max-aut-order", "100"]);
    assert_eq!(code, 3);
    let r = r.unwrap();
    assert_eq!(results(&r)["aut_brute"], Value::Null);
    assert_eq!(results(&r)["aut_formula"], 324);
    assert_eq!(results(&r)["aut_formula_verified"], false);
}

#[test]
fn failed_hypothesis_gives_no_formula() {
    let (code, r) = run(&["finite", "aut", "--group", &data("c2_trivial_2.txt"), "--coeff", "2"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(results(&r)["aut_formula"], Value::Null);
    assert_eq!(results(&r)["aut_brute"], 168);
    let failing: Vec<&str> = r["hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|h| h["holds"] == false)
        .map(|h| h["condition"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["2", "4"]);
}

#[test]
fn formula_disagreement_is_a_certificate_failure() {
    // Z/2 wr C2 = D4: an outer automorphism moves the base
    let (code, r) = run(&["finite", "aut", "--group", "C2-regular", "--coeff", "2"]);
    assert_eq!(code, 1);
    let r = r.unwrap();
    assert_eq!(results(&r)["aut_formula"], 4);
    assert_eq!(results(&r)["aut_brute"], 8);
    assert_eq!(results(&r)["aut_brute_base_preserving"], 4);
    assert_eq!(r["verdicts"]["aut_formula_matches_brute"]["value"], false);
    assert_eq!(r["verdicts"]["aut_formula_matches_base_preserving"]["value"], true);
}

#[test]
fn h1_and_endring_commands() {
    let (code, r) = run(&["finite", "h1", "--group", &data("c3_regular.txt"), "--coeff", "2,0"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(results(&r)["h1_size"], 1);
    assert_eq!(results(&r)["h1_free_rank"], 0);
    assert!(results(&r).get("aut_formula").is_none());

    let (code, r) = run(&["finite", "endring", "--group", &data("d4_square.txt"), "--coeff", "2,3"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(results(&r)["end_dim_p2"], 3);
    assert_eq!(results(&r)["end_dim_p3"], 3);
    assert_eq!(results(&r)["end_dim_q"], 3);
    assert_eq!(results(&r)["probe_violations"], 0);
}

fn without_timing(text: &str) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["timing_ms"] = Value::Null;
    serde_json::to_string_pretty(&v).unwrap()
}

#[test]
fn reports_are_stable_sorted_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_wreath"))
            .args(["finite", "analyze", "--group", "C3-regular", "--coeff", "2", "--seed", "4", "--json"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(without_timing(&texts[0]), without_timing(&texts[1]));
    // serde_json maps are ordered, so re-serializing a parsed value sorts keys
    let sorted = serde_json::to_string_pretty(&serde_json::from_str::<Value>(&texts[0]).unwrap()).unwrap();
    assert_eq!(texts[0].trim_end(), sorted);
    let report = Report::from_json(&texts[0]).unwrap();
    assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn json_to_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_wreath"))
        .args(["verify-counterexample", "--m", "4", "--ring", "Zm", "--json", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["right_inverse"], false);
}
