use qshare_web::{analyze_json, presets_json, simulate_json, verify_json};
use serde_json::Value;

const PARITY: &str = r#"{"field": {"p": 2, "m": 1}, "generator": [[1, 0, 1], [0, 1, 1]]}"#;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn presets_round_trip_through_analyze() {
    let presets = parse(&presets_json());
    let list = presets.as_array().unwrap();
    assert!(list.len() >= 6);
    for p in list {
        let report = parse(&analyze_json(&p["spec"].to_string()).unwrap());
        assert_eq!(report["d"], report["d_rank"], "{}", p["name"]);
        assert_eq!(report["distance_threshold_holds"], true);
    }
}

#[test]
fn analyze_flags_unassisted_subset() {
    let report = parse(&analyze_json(PARITY).unwrap());
    let b3 = report["subsets"].as_array().unwrap().iter().find(|r| r["b"] == "{3}").unwrap();
    assert_eq!(b3["assisted"], false);
    assert_eq!(b3["a"], "{1,2}");
}

#[test]
fn simulate_returns_all_stages() {
    let rep = r#"{"field": {"p": 3, "m": 1}, "generator": [[1, 1, 1]]}"#;
    let run = parse(&simulate_json(rep, "1, 2", "basis:2", 9).unwrap());
    assert_eq!(run["fidelity"], 1.0);
    let stages = run["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 5);
    assert_eq!(stages[1]["terms"][0]["label"], "2 2 2");
    assert_eq!(stages[0]["terms"], stages[4]["terms"]);
}

#[test]
fn simulate_reports_errors_as_text() {
    assert!(simulate_json(PARITY, "1,2", "random", 1).unwrap_err().contains("not assisted"));
    assert!(simulate_json(PARITY, "x", "random", 1).is_err());
    assert!(simulate_json("{", "1", "random", 1).is_err());
}

#[test]
fn verify_passes_on_parity_code() {
    let v = parse(&verify_json(PARITY, 3, 5).unwrap());
    assert_eq!(v["pass"], true);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 6);
}
