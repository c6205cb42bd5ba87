use std::process::{Command, Output};

fn wres(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wres"));
    cmd.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("WRES_")) {
        cmd.env_remove(k);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn boundary_total_vanishes_for_both_operators() {
    for op in ["A", "B"] {
        let o = wres(&["boundary", "--operator", op, "--json"], &[]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
        assert_eq!(v["vanishes"], true, "operator {op}");
        assert_eq!(v["cases"].as_array().map(Vec::len), Some(5));
    }
}

#[test]
fn single_case_and_unknown_case() {
    let o = wres(&["boundary", "--operator", "a", "--case", "IV"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Phi_IV"));
    let o = wres(&["boundary", "--operator", "A", "--case", "VI"], &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(wres(&["interior"], &[]).status.code(), Some(1));
    assert_eq!(wres(&["interior", "--operator", "C"], &[]).status.code(), Some(1));
    assert_eq!(wres(&["frobnicate"], &[]).status.code(), Some(1));
    assert_eq!(wres(&["verify", "--suite", "nope"], &[]).status.code(), Some(1));
    assert_eq!(wres(&["verify", "--suite", "moments", "--mc-samples", "10"], &[]).status.code(), Some(1));
    assert_eq!(wres(&["dump-symbol", "--operator", "A", "--order", "-7"], &[]).status.code(), Some(1));
}

#[test]
fn strict_mode_turns_stated_value_mismatches_into_failures() {
    let o = wres(&["interior", "--operator", "B"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let o = wres(&["interior", "--operator", "B", "--strict-paper"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = wres(&["interior", "--operator", "B"], &[("WRES_STRICT_PAPER", "true")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn interior_json_reports_discrepancies() {
    let o = wres(&["interior", "--operator", "A", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["matches_paper"], false);
    let ids: Vec<&str> = v["discrepancies"].as_array().expect("array").iter().filter_map(|d| d["term_id"].as_str()).collect();
    assert!(ids.iter().any(|id| id.contains("M8+M9")), "{ids:?}");
}

#[test]
fn dump_symbol_orders() {
    for order in ["2", "1", "0", "-2", "-3"] {
        let o = wres(&["dump-symbol", "--operator", "B", "--order", order], &[]);
        assert_eq!(o.status.code(), Some(0), "order {order}");
        assert!(!stdout(&o).trim().is_empty());
    }
}

#[test]
fn verify_is_deterministic_for_a_fixed_seed() {
    let args = ["verify", "--suite", "moments", "--mc-samples", "20000", "--seed", "7", "--json"];
    let a = wres(&args, &[]);
    let b = wres(&args, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).expect("valid JSON");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn flags_override_environment() {
    let o = wres(&["verify", "--suite", "clifford", "--seed", "11", "--json"], &[("WRES_SEED", "99"), ("WRES_SUITE", "moments")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["suites"][0]["suite"], "clifford");

    let o = wres(&["boundary", "--json"], &[("WRES_OPERATOR", "B"), ("WRES_CASE", "V")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["operator"], "B");
    assert_eq!(v["cases"].as_array().map(Vec::len), Some(1));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(wres(&["verify", "--suite", "clifford", "--strict-paper"], &[]).status.code(), Some(0));
    assert_eq!(wres(&["verify", "--suite", "parametrix"], &[]).status.code(), Some(0));
    assert_eq!(wres(&["verify", "--suite", "parametrix", "--strict-paper"], &[]).status.code(), Some(2));
    let o = wres(&["verify", "--suite", "halfplane"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("overall PASS"));
}
