//! Acceptance checks. Each test prints one line with its verdict and the
//! measured values against their budgets, then asserts the verdict.

use std::io::Write;

use pi2_core::reproduce::run_criterion;

fn check(id: u8) {
    let outcome = run_criterion(id);
    let details: Vec<String> =
        outcome.checks.iter().map(|c| format!("{} = {} ({})", c.name, c.measured, c.budget)).collect();
    let line = format!(
        "criterion {id:>2} {} {} [{:.2}s] {}\n",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.title,
        outcome.seconds,
        details.join("; ")
    );
    // bypass the harness capture so the line shows for passing tests too
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(outcome.passed, "{}", line.trim_end());
}

#[test]
fn criterion_01_symbolic_e1() {
    check(1);
}

#[test]
fn criterion_02_e1_anchors() {
    check(2);
}

#[test]
fn criterion_03_airy_constants() {
    check(3);
}

#[test]
fn criterion_04_structure() {
    check(4);
}

#[test]
fn criterion_05_z_series() {
    check(5);
}

#[test]
fn criterion_06_decay() {
    check(6);
}

#[test]
fn criterion_07_bvp_fidelity() {
    check(7);
}

#[test]
fn criterion_08_identities() {
    check(8);
}

#[test]
fn criterion_09_total_integrals() {
    check(9);
}

#[test]
fn criterion_10_hamiltonian_asymptotics() {
    check(10);
}

#[test]
fn criterion_11_jacobian() {
    check(11);
}
