use std::process::{Command, Output};

use serde_json::Value;

fn foliate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foliate"))
        .args(args)
        .env_remove("FOLIATE_LAMBDA")
        .env_remove("FOLIATE_REL_TOL")
        .env_remove("FOLIATE_ABS_TOL")
        .output()
        .expect("failed to launch foliate")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn sphere_point_human_output() {
    let out = foliate(&["bending", "--space", "S:3", "--focal", "point"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "B/Vol = 1.000000 (closed form: 1·λ)"), "{text}");
    assert!(text.contains("E/Vol = 2.500000"), "{text}");
}

#[test]
fn complex_projective_point_diverges() {
    let out = foliate(&["bending", "--space", "CP:2", "--focal", "point"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l == "Divergent (log) at r=μ"));
}

#[test]
fn two_sphere_diverges_at_both_ends() {
    let out = foliate(&["bending", "--space", "S:2", "--focal", "point", "--json"]);
    let v = json(&out);
    assert_eq!(v["status"], "divergent");
    assert_eq!(v["endpoint"], "both");
    assert!(v["value"].is_null() && v["value_per_volume"].is_null());
}

#[test]
fn bending_json_schema_and_round_trip() {
    let out = foliate(&["bending", "--space", "CaP2", "--focal", "point", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(
        &keys[..9],
        [
            "schema_version",
            "spec",
            "status",
            "value",
            "error_estimate",
            "value_per_volume",
            "exponent_estimate",
            "mu",
            "branches"
        ]
    );
    assert_eq!(v["schema_version"], 1);
    assert!((v["value_per_volume"].as_f64().unwrap() - 139.0 / 21.0).abs() < 1e-9);
    assert_eq!(v["branches"].as_array().unwrap().len(), 2);
    assert_eq!(v["branches"][0]["mult"], 7);
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn table1_json_statuses() {
    let out = foliate(&["table1", "--lambda", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    let rows = v["rows"].as_array().unwrap();
    let status = |space: &str, focal: &str| {
        rows.iter()
            .find(|r| r["space"] == space && r["focal"] == focal)
            .map(|r| r["status"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(status("S:4", "point"), "Reproduced");
    assert_eq!(status("HP:2", "point"), "Reproduced");
    assert_eq!(status("CP:3", "sub:CP:1"), "Reproduced");
    assert_eq!(status("S:4", "sub:S:2"), "DivergenceConfirmed");
    assert_eq!(status("CP:3", "sub:RP:3"), "NotComputable");
    assert!(rows.iter().all(|r| r["status"] != "Mismatch"));
}

#[test]
fn table1_at_other_lambda() {
    let out = foliate(&["table1", "--lambda", "2.5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["space"] == "S:3").unwrap().clone();
    assert!((row["value_per_volume"].as_f64().unwrap() - 2.5).abs() < 1e-9);
}

#[test]
fn lambda_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_foliate"))
        .args(["complex-radial", "--m", "2", "--json"])
        .env("FOLIATE_LAMBDA", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value_per_volume"].as_f64().unwrap() - 6.0).abs() < 1e-8);
}

#[test]
fn epsilon_deformation_csv() {
    let eps = (std::f64::consts::PI / 6.0).to_string();
    let out = foliate(&["bending", "--space", "S:2", "--focal", "point", "--epsilon", &eps, "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let record = reader.records().next().unwrap().unwrap();
    let value: f64 = record[headers.iter().position(|h| h == "value").unwrap()].parse().unwrap();
    let expected = std::f64::consts::PI * (3.0f64.ln() - 1.0);
    assert!((value - expected).abs() < 1e-8);
}

#[test]
fn profile_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = foliate(&[
        "bending",
        "--space",
        "CP:3",
        "--focal",
        "sub:CP:1",
        "--emit-profile",
        path.to_str().unwrap(),
        "--profile-samples",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["r", "alpha_1", "alpha_2", "alpha_3", "theta"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn torus_within_bound() {
    let out = foliate(&["torus", "--R", "2", "--r", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["within_bound"], true);
    assert!((v["upper_bound"].as_f64().unwrap() - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    let weighted = json(&foliate(&["torus", "--R", "2", "--r", "1", "--area-weighted", "--json"]));
    assert_eq!(weighted["area_weighted"], true);
}

#[test]
fn complex_radial_attains_two_lambda() {
    let out = foliate(&["complex-radial", "--m", "2"]);
    assert!(stdout(&out).lines().any(|l| l == "B/Vol = 2.000000 (closed form: 2·λ)"));
}

#[test]
fn integral_check_and_not_applicable() {
    let v = json(&foliate(&["check-integral", "--space", "S:5", "--focal", "sub:S:2", "--json"]));
    assert!(v["relative_gap"].as_f64().unwrap() < 1e-6);
    let v = json(&foliate(&["check-integral", "--space", "CP:2", "--focal", "point", "--json"]));
    assert_eq!(v["status"], "not_applicable");
}

#[test]
fn bounds_and_minimizer() {
    let v = json(&foliate(&["bounds", "--space", "S:4", "--q", "1", "--case", "I", "--json"]));
    assert!((v["bound_per_volume"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((v["einstein_bound_per_volume"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    let v = json(&foliate(&["bounds", "--space", "CP:2", "--q", "2", "--case", "II", "--json"]));
    assert!((v["bound_per_volume"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let out = foliate(&["bounds", "--space", "S:7", "--q", "2", "--case", "III"]);
    assert!(stdout(&out).contains("hypothesis assumed"));
    let v = json(&foliate(&["minimizer", "--space", "S:6", "--json"]));
    assert_eq!(v["verdict"], "equality");
    let v = json(&foliate(&["minimizer", "--space", "CP:2", "--json"]));
    assert_eq!(v["verdict"], "vacuous");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(foliate(&["bogus"]).status.code(), Some(2));
    assert_eq!(foliate(&["bending", "--space", "S:3"]).status.code(), Some(2));
    assert_eq!(foliate(&["bending", "--space", "XP:3", "--focal", "point"]).status.code(), Some(2));
    assert_eq!(foliate(&["bending", "--space", "S:3", "--focal", "sub:CP:1"]).status.code(), Some(2));
    assert_eq!(foliate(&["bounds", "--space", "S:5", "--q", "2", "--case", "II"]).status.code(), Some(2));
    assert_eq!(foliate(&["--rel-tol", "-1", "table1"]).status.code(), Some(2));
    assert_eq!(foliate(&["torus", "--R", "1", "--r", "2"]).status.code(), Some(2));
    let out = foliate(&["bending", "--space", "S:3", "--focal", "point", "--epsilon", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undecided_quadrature_exits_three() {
    let out = foliate(&[
        "--rel-tol",
        "1e-15",
        "--abs-tol",
        "1e-300",
        "--max-depth",
        "2",
        "bending",
        "--space",
        "HP:3",
        "--focal",
        "point",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selfcheck_passes() {
    let out = foliate(&["selfcheck", "--seed", "17"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 3);
}
