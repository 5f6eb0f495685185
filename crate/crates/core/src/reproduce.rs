//! The reproduction checks, grouped into three suites. Every check reports
//! its measured values next to the budget it is held to.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{q, Poly, RationalFunction};
use crate::asym::thirds::{h1_series_from_u, h2_series_from_u};
use crate::asym::Asymptotics;
use crate::branch::{z_plus_shift, z_series_small_mu, AdmissibleMu, Branch};
use crate::error::{Pi2Error, Result};
use crate::expansion::{airy_constants, r_recursion, shared_table};
use crate::integrals::{total_integral, Quantity};
use crate::solver::{jacobian_check, solve_bvp, verify_identities, SolverConfig};
use crate::tolerances::*;

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Expansion coefficients, the root series and decay (checks 1-6).
    Thm21,
    /// Solver fidelity, identities, Hamiltonian asymptotics, Jacobian
    /// (checks 7, 8, 10, 11).
    Cor21,
    /// Regularized total integrals (check 9).
    Thm22,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Thm21 => &[1, 2, 3, 4, 5, 6],
            Suite::Cor21 => &[7, 8, 10, 11],
            Suite::Thm22 => &[9],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Pi2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm21" => Ok(Suite::Thm21),
            "cor21" => Ok(Suite::Cor21),
            "thm22" => Ok(Suite::Thm22),
            other => Err(Pi2Error::Config(format!("unknown suite `{other}` (thm21, cor21, thm22)"))),
        }
    }
}

/// Result of one check.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Individual measurements with their budgets.
    pub checks: Vec<Check>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub budget: String,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, budget: f64) -> Self {
        Check {
            name: name.into(),
            measured: format!("{measured:.3e}"),
            budget: format!("<= {budget:.3e}"),
            passed: measured <= budget,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, budget: f64) -> Self {
        Check {
            name: name.into(),
            measured: format!("{measured:.3e}"),
            budget: format!(">= {budget:.3e}"),
            passed: measured >= budget,
        }
    }

    fn holds(name: impl Into<String>, measured: impl fmt::Display, passed: bool) -> Self {
        Check { name: name.into(), measured: measured.to_string(), budget: "exact".into(), passed }
    }

    fn error(e: &Pi2Error) -> Self {
        Check { name: "error".into(), measured: e.to_string(), budget: "no error".into(), passed: false }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "criterion {:>2} {:<4} {} ({:.2}s)", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title, self.seconds)?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "; {} = {} (budget {})", c.name, c.measured, c.budget)?;
        }
        Ok(())
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "symbolic e1 identity",
        2 => "e1 numeric anchors",
        3 => "Airy constants",
        4 => "R_k structure and leading coefficients",
        5 => "small-mu series of z_plus",
        6 => "decay of e1 as mu -> -inf",
        7 => "BVP fidelity",
        8 => "differential identities and KdV",
        9 => "regularized total integrals",
        10 => "Hamiltonian asymptotics",
        11 => "Jacobian gradient check",
        _ => "unknown",
    }
}

/// Runs check `id` (1 to 11).
pub fn run_criterion(id: u8) -> Outcome {
    let start = Instant::now();
    let checks = match id {
        1 => symbolic_e1(),
        2 => e1_anchors(),
        3 => Ok(airy()),
        4 => structure(),
        5 => z_series(),
        6 => decay(),
        7 => bvp_fidelity(),
        8 => identities(),
        9 => integrals(),
        10 => hamiltonian_asymptotics(),
        11 => jacobian(),
        _ => Err(Pi2Error::Config(format!("no criterion {id}"))),
    };
    let mut checks = checks.unwrap_or_else(|e| vec![Check::error(&e)]);
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = runtime_budget(id) {
        checks.push(Check::at_most("runtime [s]", seconds, limit));
    }
    Outcome { id, title: title(id), passed: checks.iter().all(|c| c.passed), checks, seconds }
}

fn runtime_budget(id: u8) -> Option<f64> {
    match id {
        1 => Some(E1_RUNTIME_SECS),
        5 => Some(Z_SERIES_RUNTIME_SECS),
        6 => Some(DECAY_RUNTIME_SECS),
        7 => Some(BVP_RUNTIME_SECS),
        9 => Some(INTEGRAL_RUNTIME_SECS),
        _ => None,
    }
}

pub fn run_suite(suite: Suite) -> Vec<Outcome> {
    suite.criteria().iter().map(|&id| run_criterion(id)).collect()
}

fn z_minus_8mu(branch: Branch) -> RationalFunction {
    let z = RationalFunction::z();
    &(&z * &z) - &branch.mu_of_z().scale(&q(8, 1))
}

fn symbolic_e1() -> Result<Vec<Check>> {
    let table = r_recursion(1, Branch::Plus)?;
    let gap = z_minus_8mu(Branch::Plus);
    let z2 = &RationalFunction::z() * &RationalFunction::z();
    let expected = &gap.powi(-3)?.scale(&q(-64, 3)) + &(&z2.scale(&q(256, 3)) * &gap.powi(-4)?);
    let got = table.e(1)?;
    Ok(vec![Check::holds("e1 == -64/3 g^-3 + 256 z^2/3 g^-4", got, *got == expected)])
}

fn e1_anchors() -> Result<Vec<Check>> {
    let table = shared_table(Branch::Plus, 1)?;
    let e1 = table.e(1)?;
    // mu = 0 puts z on z^3 + 48 = 0; mu = -5/6 gives z = -2
    let at_zero = e1.reduce_mod(&Poly::from_i64s(&[48, 0, 0, 1]))?;
    let at_neg = e1.eval_exact(&q(-2, 1))?;
    let mu_check = Branch::Plus.mu_of_z().eval_exact(&q(-2, 1))?;
    Ok(vec![
        Check::holds("e1(mu=0)", &at_zero, at_zero == Poly::constant(q(1, 36))),
        Check::holds("mu(z=-2)", &mu_check, mu_check == q(-5, 6)),
        Check::holds("e1(mu=-5/6)", &at_neg, at_neg == q(9, 1024)),
    ])
}

fn airy() -> Vec<Check> {
    let a1 = airy_constants(1);
    let a2 = airy_constants(2);
    let mut checks = vec![
        Check::holds("t_hat_1", &a1.t_hat, a1.t_hat == q(5, 48)),
        Check::holds("t_1", &a1.t, a1.t == q(-7, 48)),
        Check::holds("t_hat_2", &a2.t_hat, a2.t_hat == q(385, 4608)),
    ];
    for k in 1..=5usize {
        let a = airy_constants(k);
        let ratio = &a.t / &a.t_hat;
        let ki = k as i64;
        checks.push(Check::holds(format!("t_{k}/t_hat_{k}"), &ratio, ratio == q(-(6 * ki + 1), 6 * ki - 1)));
    }
    checks
}

fn structure() -> Result<Vec<Check>> {
    let table = shared_table(Branch::Plus, 4)?;
    let mut checks = Vec::new();
    for k in 1..=8usize {
        let (p, i) = (table.r_principal(k), table.r_interior(k));
        let ok = if k % 2 == 0 { p.is_diagonal() && i.is_diagonal() } else { p.is_anti_diagonal() && i.is_anti_diagonal() };
        let shape = if k % 2 == 0 { "diagonal" } else { "anti-diagonal" };
        checks.push(Check::holds(format!("R_{k} {shape}"), ok, ok));
    }
    let gc = table.g_coefficients();
    let (c1, c2, c3) = (&gc.c1, &gc.c2, &gc.c3);
    let (a1, a2) = (airy_constants(1), airy_constants(2));
    let c3sq = c3 * c3;
    let r1 = table.r_minus_one(1)?;
    let r1_12 = c2.scale(&(q(-2, 3) * &a1.t_hat)).checked_div(&c3sq)?;
    let r1_21 = RationalFunction::constant(q(2, 3) * &a1.t).checked_div(c3)?;
    let zero = RationalFunction::zero();
    let r1_ok = r1[0][1] == r1_12 && r1[1][0] == r1_21 && r1[0][0] == zero && r1[1][1] == zero;
    checks.push(Check::holds("R_1^(-1)", format!("[[0, {}], [{}, 0]]", r1[0][1], r1[1][0]), r1_ok));

    let c2sq = c2 * c2;
    let c1c3 = c1 * c3;
    let three_c2sq_minus = &c2sq.scale(&q(3, 1)) - &c1c3.scale(&q(2, 1));
    let tt = &a1.t * &a1.t_hat;
    let den = (&c3sq * &c3sq).scale(&q(9, 1));
    let r2_11 = (&three_c2sq_minus.scale(&(q(4, 1) * &a2.t_hat)) - &(&c2sq - &c1c3).scale(&(q(4, 1) * &tt)))
        .checked_div(&den)?;
    let r2_22 = (&three_c2sq_minus.scale(&(q(4, 1) * &a2.t)) - &(&c2sq.scale(&q(2, 1)) - &c1c3).scale(&(q(4, 1) * &tt)))
        .checked_div(&den)?;
    let r2 = table.r_minus_one(2)?;
    let r2_ok = r2[0][0] == r2_11 && r2[1][1] == r2_22 && r2[0][1] == zero && r2[1][0] == zero;
    checks.push(Check::holds("R_2^(-1)", format!("[[{}, 0], [0, {}]]", r2[0][0], r2[1][1]), r2_ok));
    Ok(checks)
}

/// `(z_plus(mu) - z_plus(0)) - (partial sum through mu^4 minus its constant)`.
fn z_series_remainder(mu: f64) -> Result<f64> {
    let terms = z_series_small_mu(Branch::Plus, 4);
    let shift = z_plus_shift(&AdmissibleMu::new(mu)?);
    let partial: f64 = terms.iter().skip(1).rev().fold(0.0, |acc, t| acc + t.value() * mu.powi(t.power as i32));
    Ok(shift - partial)
}

fn z_series() -> Result<Vec<Check>> {
    let c5 = z_series_remainder(Z_SERIES_FIT_MU)? / Z_SERIES_FIT_MU.powi(5);
    let mut checks = Vec::new();
    for mu in Z_SERIES_POINTS {
        let r = z_series_remainder(mu)?.abs();
        checks.push(Check::at_most(format!("|z - P4| at mu={mu:e}"), r, Z_SERIES_FACTOR * c5.abs() * mu.powi(5)));
    }
    // even part over mu^2: a2 + a4 mu^2 + a6 mu^4 + ...
    let even = |h: f64| -> Result<f64> {
        Ok((z_plus_shift(&AdmissibleMu::new(h)?) + z_plus_shift(&AdmissibleMu::new(-h)?)) / (2.0 * h * h))
    };
    let [h0, h1, h2] = Z_SECOND_COEFF_STEPS;
    let (f0, f1, f2) = (even(h0)?, even(h1)?, even(h2)?);
    let (r0, r1) = ((4.0 * f1 - f0) / 3.0, (4.0 * f2 - f1) / 3.0);
    let a2 = (16.0 * r1 - r0) / 15.0;
    checks.push(Check::at_most("|mu^2 coefficient|", a2.abs(), Z_SECOND_COEFF_TOL));
    Ok(checks)
}

fn decay() -> Result<Vec<Check>> {
    let table = shared_table(Branch::Plus, 1)?;
    let e1 = table.e(1)?;
    let mut values = Vec::new();
    for mu in DECAY_POINTS {
        let z = Branch::Plus.root(&AdmissibleMu::new(mu)?);
        values.push((mu * mu * e1.eval_f64(z)?).abs());
    }
    let ok = values.windows(2).all(|w| w[1] <= w[0]);
    Ok(vec![Check::holds(
        "|mu^2 e1| non-increasing",
        format!("{:?}", values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()),
        ok,
    )])
}

fn bvp_fidelity() -> Result<Vec<Check>> {
    let cfg = SolverConfig::default();
    let sol = solve_bvp(&cfg)?;
    let n = sol.len();
    let i = sol.nearest(BVP_PROBE_FRACTION * cfg.half_width);
    let lead = (6.0 * sol.x[i]).cbrt();
    let rel = (sol.u[i] + lead).abs() / lead;
    let anti = (0..n).map(|k| (sol.u[k] + sol.u[n - 1 - k]).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("Newton iterations", sol.newton_iterations as f64, BVP_MAX_NEWTON as f64),
        Check::at_most("max discrete ODE residual", sol.max_residual(), BVP_RESIDUAL),
        Check::at_most("|u(0.9L) + (6x)^(1/3)| / (6x)^(1/3)", rel, BVP_LEADING_REL),
        Check::at_most("max |u(x) + u(-x)|", anti, BVP_ANTISYMMETRY),
    ])
}

fn identities() -> Result<Vec<Check>> {
    let cfg = SolverConfig::default();
    let (a, b) = rayon::join(
        || verify_identities(&cfg, IDENTITY_DELTA),
        || verify_identities(&cfg, IDENTITY_DELTA / 2.0),
    );
    let (a, b) = (a?, b?);
    Ok(vec![
        Check::at_most("max |dH1/dx - u|", a.h1_x, IDENTITY_MAX),
        Check::at_most("max |dH1/dt + u^2/2 + u_xx/12|", a.h1_t, IDENTITY_MAX),
        Check::at_most("max |u_t + u u_x + u_xxx/12|", a.kdv, IDENTITY_MAX),
        Check::at_least("H1_t residual ratio under delta halving", a.h1_t / b.h1_t, IDENTITY_HALVING_RATIO),
        Check::at_least("KdV residual ratio under delta halving", a.kdv / b.kdv, IDENTITY_HALVING_RATIO),
    ])
}

fn integrals() -> Result<Vec<Check>> {
    let budgets = IntegralBudgets::default();
    let sols: Vec<_> = {
        use rayon::prelude::*;
        INTEGRAL_TIMES
            .par_iter()
            .map(|&t| solve_bvp(&SolverConfig::at(t, INTEGRAL_HALF_WIDTH)))
            .collect::<Result<_>>()?
    };
    let mut checks = Vec::new();
    for (sol, t) in sols.iter().zip(INTEGRAL_TIMES) {
        for quantity in Quantity::ALL {
            let r = total_integral(quantity, t, sol, quantity.default_tail_order())?;
            let name = format!("{quantity} at t={t}");
            if quantity == Quantity::H1 {
                checks.push(Check::at_most(format!("|total| {name}"), r.total.abs(), r.error_estimate));
                checks.push(Check::at_most(format!("error estimate {name}"), r.error_estimate, budgets.h1_estimate));
            } else {
                checks.push(Check::at_most(format!("|total| {name}"), r.total.abs(), budgets.for_quantity(quantity)));
            }
        }
    }
    Ok(checks)
}

fn hamiltonian_asymptotics() -> Result<Vec<Check>> {
    let cfg = SolverConfig::default();
    let sol = solve_bvp(&cfg)?;
    let i = sol.nearest(BVP_PROBE_FRACTION * cfg.half_width);
    let (x, s) = (sol.x[i], sol.x[i].abs());
    let asym = Asymptotics::new(0)?;
    let side = Branch::of_x(x).ok_or(Pi2Error::ZeroAbscissa)?;
    // next terms of the two-term forms: s^(-10/3) for H1, s^(-3) for H2
    let h1_next = h1_series_from_u(side, 0.0, 2)?.coeff(-10).abs() * s.powf(-10.0 / 3.0);
    let h2_next = h2_series_from_u(side, 0.0, 2)?.coeff(-9).abs() * s.powi(-3);
    let d1 = (sol.h1[i] - asym.h1(x, 0.0)?.value).abs();
    let h2_asym = asym.h2(x, 0.0)?.value;
    let d2 = (sol.h2[i] - h2_asym).abs();
    Ok(vec![
        Check::at_most(format!("|H1 - h1_asym| at x={x}"), d1, HAMILTONIAN_FACTOR * h1_next),
        Check::at_most(format!("|H2 - h2_asym| at x={x}"), d2, HAMILTONIAN_FACTOR * h2_next),
    ])
}

fn jacobian() -> Result<Vec<Check>> {
    let dev = jacobian_check(JACOBIAN_NODES, SolverConfig::default().half_width, 0.0)?;
    Ok(vec![Check::at_most("max relative column deviation", dev, JACOBIAN_REL)])
}
