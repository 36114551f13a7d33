use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rawlsian_core::ratio::parse_q;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn rawlsian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rawlsian")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = rawlsian(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn solve_rawlsian_on_shared_top() {
    let input = data("shared_top.json");
    let doc = ok_json(&["solve", "--rule", "rawlsian", "--input", input.to_str().unwrap()]);
    assert_eq!(
        strings(&doc["entries"]),
        vec![vec!["1/2", "1/2", "0"], vec!["1/2", "1/2", "0"], vec!["0", "0", "1"]]
    );
    assert_eq!(doc["decimals"][0][0], "0.500000");
    assert_eq!(doc["rule"], "rawlsian");
}

#[test]
fn csv_and_json_inputs_agree() {
    let json = ok_json(&["solve", "--rule", "ps", "--input", data("shared_top.json").to_str().unwrap()]);
    let csv = ok_json(&["solve", "--rule", "ps", "--input", data("shared_top.csv").to_str().unwrap()]);
    assert_eq!(json["entries"], csv["entries"]);
    assert_eq!(strings(&json["entries"])[0], vec!["1/2", "1/6", "1/3"]);
}

#[test]
fn seeded_mtav_is_byte_identical() {
    let input = data("shared_top.json");
    let args = ["--seed", "1", "solve", "--rule", "mtav", "--input", input.to_str().unwrap()];
    let a = rawlsian(&args);
    let b = rawlsian(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compare_rawlsian_with_ps() {
    // by hand: agents 1 and 2 have top-k masses (1/2, 1, 1) under the
    // Rawlsian rule and (1/2, 2/3, 1) under PS; agent 3 has (0, 1, 1)
    // against (2/3, 1, 1)
    let input = data("shared_top.json");
    let doc = ok_json(&["compare", "--input", input.to_str().unwrap(), "--rules", "rawlsian,ps"]);
    let row = &doc["pairwise"][0];
    assert_eq!(row["first"], "rawlsian");
    assert_eq!(row["prefer_first"], 2);
    assert_eq!(row["prefer_second"], 1);
    assert_eq!(row["prefer_neither"], 0);
    assert_eq!(row["per_agent"], serde_json::json!(["first", "first", "second"]));
    assert_eq!(doc["max_rank"][0]["max_rank"], 2);
    assert_eq!(doc["max_rank"][1]["max_rank"], 3);
    assert_eq!(doc["expected_rank_counts"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_then_analyze_and_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.csv");
    let input = data("shared_top.json");
    let out = rawlsian(&[
        "solve", "--rule", "ps", "--input", input.to_str().unwrap(), "--format", "csv", "--out", x.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc = ok_json(&["analyze", "--input", input.to_str().unwrap(), "--assignment", x.to_str().unwrap()]);
    let checks = &doc["checks"];
    assert_eq!(checks["envy"]["enviers"], 0);
    assert_eq!(checks["sd"]["efficient"], true);
    assert_eq!(checks["maxrank"]["max_rank"], 3);
    assert!(checks["egalitarian"]["egalitarian"].is_boolean());
    let counts: Vec<String> =
        checks["rank"]["expected_counts"].as_array().unwrap().iter().map(|c| c["exact"].as_str().unwrap().into()).collect();
    assert_eq!(counts.iter().map(|c| parse_q(c).unwrap()).sum::<rawlsian_core::Q>(), parse_q("3").unwrap());

    let doc = ok_json(&["decompose", "--assignment", x.to_str().unwrap()]);
    let terms = doc["terms"].as_array().unwrap();
    assert!(terms.len() <= doc["term_bound"].as_u64().unwrap() as usize);
    let total: rawlsian_core::Q = terms.iter().map(|t| parse_q(t["weight"]["exact"].as_str().unwrap()).unwrap()).sum();
    assert_eq!(total, parse_q("1").unwrap());
}

#[test]
fn analyze_selected_checks_only() {
    let input = data("shared_top.json");
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    let bad = "{\"schema_version\":1,\"agents\":[\"1\",\"2\",\"3\"],\"objects\":[\"a\",\"b\",\"c\"],\
               \"entries\":[[\"0\",\"0\",\"1\"],[\"0\",\"1\",\"0\"],[\"1\",\"0\",\"0\"]]}";
    std::fs::write(&x, bad).unwrap();
    let doc = ok_json(&["analyze", "--input", input.to_str().unwrap(), "--assignment", x.to_str().unwrap(), "--checks", "sd"]);
    let checks = doc["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks["sd"]["efficient"], false);
    assert!(!checks["sd"]["improving_cycle"].as_array().unwrap().is_empty());
}

#[test]
fn report_writes_bundle_and_cdf() {
    let dir = tempfile::tempdir().unwrap();
    let (json, cdf) = (dir.path().join("r.json"), dir.path().join("cdf.csv"));
    let input = data("shared_top.json");
    let out = rawlsian(&[
        "report", "--input", input.to_str().unwrap(), "--out", json.to_str().unwrap(), "--cdf", cdf.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["rules"], serde_json::json!(["rawlsian", "ps", "mtav"]));
    for key in ["assignments", "max_rank", "envy", "cdf"] {
        assert_eq!(doc[key].as_array().unwrap().len(), 3, "{key}");
    }
    assert_eq!(doc["pairwise"].as_array().unwrap().len(), 3);
    let text = std::fs::read_to_string(&cdf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,rawlsian,ps,mtav");
    assert_eq!(lines[3], "3,3.000000,3.000000,3.000000");
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let a = rawlsian(&["--seed", "7", "gen", "--n", "5"]);
    let b = rawlsian(&["--seed", "7", "gen", "--n", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["preferences"].as_array().unwrap().len(), 5);
    let pl = rawlsian(&["gen", "--n", "3", "--model", "plackett-luce", "--weights", "5,1,1", "--format", "csv"]);
    assert!(pl.status.success());
    assert_eq!(String::from_utf8(pl.stdout).unwrap().lines().count(), 4);
}

#[test]
fn probes_report_counts() {
    let doc = ok_json(&["probe", "--manipulability", "--n", "3", "--rule", "ps"]);
    assert_eq!(doc["misreports_checked"], 3 * 6 * 5);
    assert_eq!(doc["obviously_manipulable"], false);
    let doc = ok_json(&["--seed", "4", "probe", "--swaps", "--n", "3", "--trials", "50"]);
    assert_eq!(doc["trials"], 50);
    assert_eq!(doc["lower_invariance_violations"], 0);
}

#[test]
fn input_errors_exit_with_two() {
    let out = rawlsian(&["solve", "--rule", "rawlsian", "--input", data("repeated.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2: object 'a' listed twice"), "{err}");

    let input = data("shared_top.json");
    let out = rawlsian(&["solve", "--rule", "rawlsian", "--sigma", "3,2", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--sigma"));

    let out = rawlsian(&["solve", "--rule", "rawlsian", "--input", "/nonexistent/p.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rawlsian(&["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(rawlsian(&["probe", "--n", "3"]).status.code(), Some(2));
    assert_eq!(rawlsian(&["probe", "--manipulability", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn sigma_rule_from_the_command_line() {
    let input = data("shared_top.json");
    let doc = ok_json(&["solve", "--rule", "sigma", "--sigma", "3,2", "--input", input.to_str().unwrap()]);
    let rawls = ok_json(&["solve", "--rule", "rawlsian", "--input", input.to_str().unwrap()]);
    assert_eq!(doc["entries"], rawls["entries"]);
}
