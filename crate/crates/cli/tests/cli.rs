use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn psystem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psystem"))
        .args(args)
        .env_remove("PSYSTEM_LOG")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const OGDEN: &str = r#"{"kind":"ogden","rho0":1,"mu":1,"lambda":1}"#;

#[test]
fn tables_match_reference_cells() {
    let out = psystem(&["tables"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("beta,v0_tilde,ogden,m_kirchhoff,blatzko_f025,blatzko_f05")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 28);
    let cell = |beta: &str, v0: &str, col: usize| {
        rows.iter().find(|r| r[0] == beta && r[1] == v0).unwrap()[col].to_owned()
    };
    assert_eq!(cell("0.25", "10", 2), "-0.9063");
    assert_eq!(cell("2", "0.1", 3), "-0.123866");
}

#[test]
fn tables_are_deterministic() {
    let a = psystem(&["tables"]);
    let b = psystem(&["tables"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables_digits_and_json() {
    let out = psystem(&["tables", "--betas", "0.5", "--v0-tildes", "2", "--digits", "2"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("0.5,2,-0.64,-0.64"), "{csv}");

    let v = stdout_json(&psystem(&["tables", "--betas", "0.5", "--v0-tildes", "2", "--format", "json"]));
    let g = v[0]["rows"][0]["gamma_l"][0].as_f64().unwrap();
    assert!((g + 0.6446).abs() < 5e-5);
}

#[test]
fn tables_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = psystem(&["tables", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&path).unwrap().starts_with("beta,v0_tilde"));
}

#[test]
fn shock_linear_closed_form() {
    let model = r#"{"kind":"linear","rho0":1,"mu":0.25,"lambda":0.5}"#;
    let v = stdout_json(&psystem(&["shock", "--model", model, "--v0", "0.5"]));
    assert!((v["gamma_l"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!((v["sigma"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn shock_csv_row() {
    let out = psystem(&["shock", "--model", OGDEN, "--v0", "1.4142135623730951", "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("v0,gamma_l,sigma,residual"));
    let g: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((g + 0.6446).abs() < 5e-5);
}

#[test]
fn model_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, OGDEN).unwrap();
    let v = stdout_json(&psystem(&["shock", "--model", path.to_str().unwrap(), "--v0", "1"]));
    assert!(v["gamma_l"].as_f64().unwrap() < 0.0);
}

#[test]
fn analyze_stvk_onset() {
    let model = r#"{"kind":"stvk","rho0":1,"mu":1,"lambda":1}"#;
    let v = stdout_json(&psystem(&["analyze", "--model", model]));
    let onset = v["thresholds"]["hyperbolic_onset"].as_f64().unwrap();
    assert!((onset - (-1.0 + 1.0 / 3f64.sqrt())).abs() < 1e-14);
}

#[test]
fn analyze_with_range() {
    let v = stdout_json(&psystem(&["analyze", "--model", OGDEN, "--range", "-0.5,2"]));
    assert_eq!(v["hyperbolic"][0][0].as_f64(), Some(-0.5));
    assert_eq!(v["hyperbolic"][0][1].as_f64(), Some(2.0));
}

#[test]
fn entropy_ogden_holds() {
    let v = stdout_json(&psystem(&["entropy", "--model", OGDEN, "--gamma-l", "-0.5"]));
    assert_eq!(v["holds"], Value::Bool(true));
}

#[test]
fn entropy_stvk_fails() {
    let model = r#"{"kind":"stvk","rho0":1,"mu":1,"lambda":1}"#;
    let v = stdout_json(&psystem(&["entropy", "--model", model, "--gamma-l", "-0.2"]));
    assert_eq!(v["holds"], Value::Bool(false));
}

#[test]
fn simulate_writes_field_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.csv");
    let config = r#"{"model":{"kind":"ogden","rho0":1,"mu":1,"lambda":1},
        "v0":1.4142135623730951,"domain_length":1,"cells":400,"cfl":0.9,"t_end":0.3}"#;
    let out = psystem(&["simulate", "--config", config, "--out", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    let sigma_est = v["sigma_est"].as_f64().unwrap();
    let sigma_rh = v["sigma_rh"].as_f64().unwrap();
    assert!((sigma_est / sigma_rh - 1.0).abs() < 0.05);
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next(), Some("x,V,Gamma"));
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn malformed_json_exits_2_naming_field() {
    let out = psystem(&["shock", "--model", r#"{"kind":"ogden","rho0":1,"mu":1}"#, "--v0", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));

    let out = psystem(&["shock", "--model", r#"{"kind":"ogden","rho0":1,"mu":-1,"lambda":1}"#, "--v0", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));
}

#[test]
fn invalid_config_exits_2() {
    let config = r#"{"model":{"kind":"ogden","rho0":1,"mu":1,"lambda":1},
        "v0":1,"domain_length":1,"cells":8,"cfl":0.9,"t_end":0.1}"#;
    let out = psystem(&["simulate", "--config", config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cells"));
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    assert_eq!(psystem(&["shock", "--model", "/nonexistent.json", "--v0", "1"]).status.code(), Some(2));
    assert_eq!(psystem(&["tables", "--bogus"]).status.code(), Some(2));
    assert_eq!(psystem(&["entropy", "--model", OGDEN, "--gamma-l", "0.5"]).status.code(), Some(2));
}

#[test]
fn no_solution_exits_3() {
    let model = r#"{"kind":"stvk","rho0":1,"mu":1,"lambda":1}"#;
    let out = psystem(&["shock", "--model", model, "--v0", "10"]);
    assert_eq!(out.status.code(), Some(3));
}
