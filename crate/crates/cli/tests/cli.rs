//! End-to-end runs of the `pi2` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use pi2_core::algebra::{q, RationalFunction};
use pi2_core::branch::Branch;
use serde_json::Value;

fn pi2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi2")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pi2(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strings<T: ToString>(xs: &[T]) -> Vec<Value> {
    xs.iter().map(|x| Value::String(x.to_string())).collect()
}

fn scratch_file(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("pi2-cli-{}-{name}", std::process::id()))
}

#[test]
fn numeric_e1_at_zero_mu() {
    let v = json(&["coeffs", "--branch", "plus", "--kmax", "1", "--mu", "0"]);
    let e1 = v["e"][0].as_f64().unwrap();
    assert!((e1 - 1.0 / 36.0).abs() < 1e-15);
}

#[test]
fn both_branches_agree_at_zero_mu() {
    let plus = json(&["coeffs", "--branch", "plus", "--kmax", "1", "--mu", "0"]);
    let minus = json(&["coeffs", "--branch", "minus", "--kmax", "1", "--mu", "0"]);
    assert_eq!(plus["e"][0], minus["e"][0]);
    assert!((minus["z"].as_f64().unwrap() - 2.0 * 6f64.cbrt()).abs() < 1e-14);
}

#[test]
fn symbolic_e1_lists_match_closed_form() {
    let v = json(&["coeffs", "--kmax", "1"]);
    let z = RationalFunction::z();
    let gap = &(&z * &z) - &Branch::Plus.mu_of_z().scale(&q(8, 1));
    let closed = &gap.powi(-3).unwrap().scale(&q(-64, 3)) + &(&(&z * &z).scale(&q(256, 3)) * &gap.powi(-4).unwrap());
    let (num, den) = closed.to_integer_lists();
    assert_eq!(v["e"][0]["numerator"].as_array().unwrap(), &strings(&num));
    assert_eq!(v["e"][0]["denominator"].as_array().unwrap(), &strings(&den));
}


#[test]
fn kmax_cap_is_enforced() {
    let out = pi2(&["coeffs", "--kmax", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--x", "-7.5", "--t", "0.25", "--quantity", "h1"];
    assert_eq!(pi2(&args).stdout, pi2(&args).stdout);
    let v = json(&args);
    assert_eq!(v["branch"], "minus");
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_then_integrate_from_file() {
    let path = scratch_file("grid.csv");
    let p = path.to_str().unwrap();
    let out = pi2(&["solve", "--t", "0", "--L", "16", "--out", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&["integrate", "--quantity", "u2", "--t", "0", "--sol", p]);
    std::fs::remove_file(&path).ok();
    for key in ["core_value", "counterterm_value", "tail_correction", "total", "error_estimate"] {
        assert!(report[key].is_number(), "{key} missing");
    }
    assert_eq!(report["L"].as_f64(), Some(16.0));
    assert_eq!(report["passed"], true);
}

#[test]
fn verify_reports_identity_residuals() {
    let v = json(&["verify", "--t", "0", "--dt", "1e-3"]);
    for key in ["h1_x", "h1_t", "kdv"] {
        assert!(v[key].as_f64().unwrap() <= 1e-4, "{key}");
    }
}

#[test]
fn reproduce_exit_status_follows_the_checks() {
    let out = pi2(&["reproduce", "thm21"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS criterion")).count(), 6);
}
