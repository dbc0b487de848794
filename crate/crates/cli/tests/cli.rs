use std::process::{Command, Output};

use relk2::k2::K2Report;

fn relk2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relk2"))
        .args(args)
        .env_remove("RELK2_BUDGET_PAIRS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn k2_both_routes_agree_on_klein_four() {
    let out = relk2(&["k2", "--p", "2", "--exponents", "1,1", "--route", "both", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: K2Report = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report.invariant_factors, vec![2, 2]);
    assert_eq!(report.agreement, Some(true));
    assert_eq!(report.basis.len(), 2);
}

#[test]
fn k2_json_round_trips_byte_identically() {
    for args in [
        vec!["k2", "--p", "3", "--exponents", "1,1", "--route", "tensor", "--format", "json"],
        vec!["k2", "--p", "2", "--exponents", "1,2", "--route", "tensor", "--format", "json"],
        vec!["k2", "--p", "5", "--exponents", "1", "--route", "tensor", "--format", "json"],
    ] {
        let out = relk2(&args);
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        let report: K2Report = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), text.trim());
    }
}

#[test]
fn k2_rank_matches_group_rank() {
    let out = relk2(&["k2", "--p", "3", "--exponents", "1,1,1", "--route", "tensor", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: K2Report = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report.invariant_factors, vec![3, 3, 3]);
}

#[test]
fn tensor_route_rejects_order_two() {
    let out = relk2(&["k2", "--p", "2", "--exponents", "1", "--route", "tensor"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("|G|"));
}

#[test]
fn invalid_prime_is_a_hypothesis_error() {
    let out = relk2(&["k2", "--p", "4", "--exponents", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_on_c2_is_trivial() {
    let out = relk2(&["oracle", "--p", "2", "--exponents", "1", "--mode", "full"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("= trivial"), "{}", stdout(&out));
}

#[test]
fn oracle_export_writes_presentation() {
    let dir = std::env::temp_dir().join(format!("relk2-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pres.json");
    let out = relk2(&["oracle", "--p", "2", "--exponents", "1,1", "--export", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["invariant_factors"], serde_json::json!([2, 2]));
    assert_eq!(value["mode"], "full");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn budget_overrun_exits_three() {
    let out = relk2(&["oracle", "--p", "2", "--exponents", "1,1", "--budget-pairs", "10"]);
    assert_eq!(code(&out), 3);
    let via_env = Command::new(env!("CARGO_BIN_EXE_relk2"))
        .args(["oracle", "--p", "2", "--exponents", "1,1"])
        .env("RELK2_BUDGET_PAIRS", "10")
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(3));
}

#[test]
fn excision_rank_two() {
    let out = relk2(&["excision", "--rank", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["integral"]["invariant_factors"], serde_json::json!([2, 2]));
    assert_eq!(value["structures_equal"], true);
}

#[test]
fn square_reports_four_corners() {
    let out = relk2(&["square", "--p", "2", "--exponents", "1,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let corners = value["corners"].as_array().unwrap();
    assert_eq!(corners.len(), 4);
    let sizes: Vec<u64> = corners.iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![32, 16, 16, 8]);
}

#[test]
fn verify_reports_at_least_six_suites() {
    let out = relk2(&["verify", "--suites", "factorization,omega,tensor,oracle,scholium,excision,linear", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let suites = value["suites"].as_array().unwrap();
    assert!(suites.len() >= 6);
    assert!(suites.iter().all(|s| s["passed"] == true));
}

#[test]
fn verify_names_injected_failure() {
    let out = relk2(&["verify", "--suites", "omega,linear", "--inject-fault", "linear"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("linear")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("PASS") && l.contains("omega")), "{text}");
}

#[test]
fn verify_respects_prime_list() {
    let out = relk2(&["verify", "--suites", "tensor", "--p-list", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
}
