use std::fs;
use std::process::{Command, Output};

fn feestat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feestat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_exits_zero() {
    assert_eq!(feestat(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_flag_is_a_config_error() {
    assert_eq!(feestat(&["wang", "--bogus"]).status.code(), Some(1));
}

#[test]
fn invalid_parameters_are_config_errors() {
    let o = feestat(&["wang", "--mu-beta", "1", "--sigma2-beta", "1", "--tol", "1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn missing_input_is_an_io_error() {
    assert_eq!(feestat(&["adf", "/nonexistent/series.csv"]).status.code(), Some(2));
}

#[test]
fn basefee_overflow_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = feestat(&["basefee", "--n", "500000", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn demand_then_adf_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("demand.csv");
    let eda = dir.path().join("eda.json");
    let o = feestat(&[
        "demand", "--n", "5000", "--seed", "4", "--out", csv.to_str().unwrap(), "--eda", eda.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,value\n"));
    assert_eq!(text.lines().count(), 5001);

    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&eda).unwrap()).unwrap();
    assert_eq!(report["histogram"].as_array().unwrap().len(), 50);
    assert!(report["qq"].is_array());

    let o = feestat(&["adf", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let result: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(result["pvalue"].as_f64().unwrap() < 1e-6);
    assert!(result["critical_values"]["5%"].is_number());
}

#[test]
fn basefee_csv_feeds_adf_by_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basefee.csv");
    let o = feestat(&["basefee", "--n", "3000", "--seed", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,basefee,factor"));
    assert!(lines.next().unwrap().ends_with(','));
    assert_eq!(text.lines().count(), 3002);

    let o = feestat(&["adf", path.to_str().unwrap(), "--column", "basefee"]);
    assert_eq!(o.status.code(), Some(0));
    let result: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(result["pvalue"].as_f64().unwrap() > 0.05);
}

#[test]
fn wang_reports_default_setup_as_unsatisfied() {
    let o = feestat(&["wang", "--mu-beta", "1.00176", "--sigma2-beta", "1.41056e-12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["satisfied"], serde_json::Value::Bool(false));
}

#[test]
fn simulators_are_reproducible_across_invocations() {
    for args in [
        vec!["ar1", "--alpha", "0.5", "--n", "200", "--seed", "9"],
        vec!["rca1", "--mu-beta", "0.3", "--sigma2-beta", "0.2", "--n", "200", "--seed", "9"],
        vec!["boundary", "--points", "20"],
        vec!["region", "--resolution", "12"],
    ] {
        let a = feestat(&args);
        let b = feestat(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn pipeline_overrides_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"experiment": "basefee_runs"}"#).unwrap();
    let out = dir.path().join("out");
    let o = feestat(&[
        "pipeline", cfg.to_str().unwrap(), "--n-blocks", "1000", "--n-sims", "2", "--seed", "5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("basefee_001.csv").exists());
    assert!(out.join("basefee_002.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["n_blocks"], 1000);
    assert_eq!(manifest["config"]["seed"], 5);
    assert_eq!(manifest["artifacts"].as_object().unwrap().len(), 2);
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"experiment": "table2", "n_sims": 0}"#).unwrap();
    assert_eq!(feestat(&["pipeline", cfg.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&cfg, "{not json").unwrap();
    assert_eq!(feestat(&["pipeline", cfg.to_str().unwrap()]).status.code(), Some(1));
}
