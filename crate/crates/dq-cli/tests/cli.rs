//! Binary-level checks: output formats, exit codes, determinism, parameter
//! plumbing.

use std::process::{Command, Output};

fn dq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dq"))
        .args(args)
        .env_remove("DQ_HBAR")
        .env_remove("DQ_MASS")
        .env_remove("DQ_OMEGA")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn star_command_prints_the_product() {
    let out = dq(&["star", "--scheme", "moyal", "--f", "q", "--g", "p"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"result\":\"q*p + 0.5*i*hbar\""), "{text}");

    let out = dq(&["star", "--scheme", "normal", "--f", "a", "--g", "abar"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"result\":\"a*abar + hbar\""));
}

#[test]
fn malformed_expression_exits_with_code_2() {
    let out = dq(&["star", "--scheme", "moyal", "--f", "q^-1", "--g", "p"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("byte 2"), "position missing from: {err}");
}

#[test]
fn negative_count_is_a_usage_error() {
    let out = dq(&["spectrum", "--scheme", "moyal", "--n-max", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_json_has_energies_and_residuals() {
    let out = dq(&["spectrum", "--scheme", "normal", "--n-max", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let energies: Vec<f64> =
        v["lines"].as_array().unwrap().iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    assert_eq!(energies, vec![0.0, 1.0, 2.0, 3.0]);
}

#[test]
fn identical_inputs_produce_byte_identical_json() {
    let a = dq(&["spectrum", "--scheme", "moyal", "--n-max", "5"]);
    let b = dq(&["spectrum", "--scheme", "moyal", "--n-max", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let a = dq(&["kernel", "--method", "slices", "--t", "0.4", "--slices", "128"]);
    let b = dq(&["kernel", "--method", "slices", "--t", "0.4", "--slices", "128"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wigner_center_value_of_the_first_excited_state() {
    let out = dq(&["wigner", "--n", "1", "--nq", "16", "--np", "16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let center = text
        .lines()
        .find(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,"))
        .expect("origin row");
    let re: f64 = center.split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(re, -2.0);
}

#[test]
fn wigner_out_of_range_index_fails() {
    let out = dq(&["wigner", "--n", "99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn marginal_matches_the_ground_state_density() {
    let out = dq(&["marginal", "--n", "0", "--axis", "q", "--nq", "64", "--np", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut worst: f64 = 0.0;
    for line in text.lines().skip(1) {
        let mut parts = line.split(',');
        let x: f64 = parts.next().unwrap().parse().unwrap();
        let v: f64 = parts.next().unwrap().parse().unwrap();
        let expect = (1.0 / std::f64::consts::PI).sqrt() * (-x * x).exp();
        worst = worst.max((v - expect).abs());
    }
    assert!(worst < 1e-6, "marginal error {worst}");
}

#[test]
fn env_vars_set_parameters_and_flags_beat_them() {
    let out = Command::new(env!("CARGO_BIN_EXE_dq"))
        .args(["spectrum", "--scheme", "moyal", "--n-max", "0"])
        .env("DQ_OMEGA", "2.0")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lines"][0]["energy"].as_f64().unwrap(), 1.0);

    let out = Command::new(env!("CARGO_BIN_EXE_dq"))
        .args(["spectrum", "--scheme", "moyal", "--n-max", "0", "--omega", "4.0"])
        .env("DQ_OMEGA", "2.0")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lines"][0]["energy"].as_f64().unwrap(), 2.0);
}

#[test]
fn bridge_reports_near_zero_difference() {
    let out = dq(&["bridge", "--t", "0.7", "--q", "0.5", "--p", "-0.3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_single_suite_exits_zero() {
    let out = dq(&["verify", "--suite", "spectrum"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"].as_bool(), Some(true));
}

#[test]
fn verify_unknown_suite_fails() {
    let out = dq(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join("dq-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    let to_file = Command::new(env!("CARGO_BIN_EXE_dq"))
        .args(["spectrum", "--scheme", "moyal", "--n-max", "2", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(to_file.status.success());
    let direct = dq(&["spectrum", "--scheme", "moyal", "--n-max", "2"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
