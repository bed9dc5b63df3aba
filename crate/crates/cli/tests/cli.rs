use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltaprop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_reports_the_smallest_member() {
    let v = json(&["check", "24"]);
    assert_eq!(v["member"], true);
    assert_eq!(v["primitive"], true);
    assert_eq!(v["triples"], serde_json::json!([[2, 3, 3]]));
}

#[test]
fn classify_names_the_deciding_rule() {
    let v = json(&["classify", "12"]);
    assert_eq!(v["member"], false);
    assert_eq!(v["rule"], "TwoPrimesLowExp");
    assert!(v["witness"].is_null());

    let v = json(&["classify", "105"]);
    assert_eq!(v["member"], true);
    assert_eq!(v["witness"], serde_json::json!([3, 5, 5]));
}

#[test]
fn primitive_lists_decompositions_by_m() {
    let v = json(&["primitive", "5616"]);
    assert_eq!(v["primitive"], false);
    assert_eq!(
        v["decompositions"],
        serde_json::json!([{"alpha": 3, "m": 624}, {"alpha": 2, "m": 1404}])
    );
}

#[test]
fn family_accepts_negative_coefficients() {
    let v = json(&["family", "--a", "1", "--b", "0", "--c", "-1", "--count", "3"]);
    let ns: Vec<u64> = v["members"].as_array().unwrap().iter().map(|m| m["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [24, 105, 280]);
}

#[test]
fn realize_emits_dot() {
    let out = run(&["realize", "2", "3", "3", "--da", "3", "--format", "dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph S {"));
    assert_eq!(dot.matches("shape=point").count(), 18);
}

#[test]
fn realize_json_matches_the_golden_graph() {
    let v = json(&["realize", "2", "3", "3"]);
    let r = &v["realizations"][0];
    assert_eq!(v["n"], 24);
    assert_eq!(r["params"]["kSize"], 18);
    assert_eq!(r["phi"]["weightedEdgeCount"], 72);
    assert_eq!(r["stats"]["balanced"], true);
}

#[test]
fn enumerate_csv_and_jsonl_agree() {
    let csv = run(&["enumerate", "--max", "1000", "--format", "csv"]);
    let jsonl = run(&["enumerate", "--max", "1000", "--format", "jsonl"]);
    let csv_ns: Vec<String> = String::from_utf8(csv.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_owned())
        .collect();
    let jsonl_ns: Vec<String> = String::from_utf8(jsonl.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["n"].to_string())
        .collect();
    assert_eq!(csv_ns, jsonl_ns);
    assert_eq!(&csv_ns[..2], ["24", "40"]);

    let odd = json(&["enumerate", "--max", "1000", "--odd-only"]);
    assert_eq!(odd["members"][0]["n"], 105);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["check", "5616"][..],
        &["enumerate", "--max", "5000", "--primitive-only"],
        &["realize", "5", "7", "11", "--all-active"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn report_wraps_results() {
    let v = json(&["--report", "triples", "385"]);
    assert_eq!(v["command"], "triples");
    assert_eq!(v["inputs"]["n"], 385);
    assert_eq!(v["results"]["triples"], serde_json::json!([[5, 7, 11], [7, 11, 11]]));
    assert!(v["elapsedMs"].is_u64());
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["check", "1"][..],
        &["check", "-5"],
        &["realize", "2", "3", "7"],
        &["family", "--a", "0", "--b", "1", "--c", "1"],
        &["enumerate", "--max", "10", "--format", "csv", "--report"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--max", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|r| r["failed"] == 0));
}
