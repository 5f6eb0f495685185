//! Boundary-value solver for `u(x, t)` on `[-L, L]` with asymptotic
//! boundary data, plus the Hamiltonians and differential identities
//! evaluated along a solution.

pub mod banded;
pub mod bvp;
mod io;

use serde::{Deserialize, Serialize};

use crate::asym::Asymptotics;
use crate::branch::{mu_admissible, DEFAULT_MU_BOUND};
use crate::error::{Pi2Error, Result};
use bvp::{max_abs, newton, BoundaryData, BoxScheme, NewtonOutcome};

pub use io::{read_csv, write_csv, CSV_HEADER};

/// Parameters of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub t: f64,
    /// Half-width `L` of the interval.
    pub half_width: f64,
    /// Grid points (odd, at least 401).
    pub n: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Largest continuation step in `t`.
    pub continuation_step: f64,
    pub max_halvings: u32,
    /// Number of `e_k` terms in the boundary data.
    pub boundary_depth: usize,
    /// Solve again on the doubled grid and extrapolate.
    pub richardson: bool,
    pub mu_bound: f64,
    pub boundary: BoundaryKind,
}

/// How the asymptotic data enters the boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// `u` and `u_x` equal to the truncated expansion at both ends.
    Pinned,
    /// Deviation from the expansion free of modes growing outward.
    Projected,
}

impl std::str::FromStr for BoundaryKind {
    type Err = Pi2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pinned" => Ok(BoundaryKind::Pinned),
            "projected" => Ok(BoundaryKind::Projected),
            other => Err(Pi2Error::Config(format!("unknown boundary kind `{other}`"))),
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t: 0.0,
            half_width: 12.0,
            n: 4001,
            newton_tol: 1e-10,
            max_newton: 50,
            continuation_step: 0.1,
            max_halvings: 6,
            boundary_depth: 2,
            richardson: true,
            mu_bound: DEFAULT_MU_BOUND,
            boundary: BoundaryKind::Projected,
        }
    }
}

impl SolverConfig {
    pub fn at(t: f64, half_width: f64) -> Self {
        SolverConfig { t, half_width, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 401 || self.n % 2 == 0 {
            return Err(Pi2Error::Config(format!("grid size {} must be odd and at least 401", self.n)));
        }
        if !(self.half_width > 0.0) || !self.t.is_finite() {
            return Err(Pi2Error::Config(format!("bad interval L={} or t={}", self.half_width, self.t)));
        }
        if !(self.newton_tol > 0.0) || !(self.continuation_step > 0.0) {
            return Err(Pi2Error::Config("tolerance and continuation step must be positive".into()));
        }
        let mu = self.t * self.half_width.powf(-2.0 / 3.0);
        let adm = mu_admissible(mu, self.mu_bound);
        if !adm.admissible {
            return Err(Pi2Error::Inadmissible { mu, bound: self.mu_bound, reason: adm.reason.unwrap_or_default() });
        }
        Ok(())
    }

    /// Nominal `t` values visited from `0` to the target.
    pub fn continuation_steps(&self) -> Vec<f64> {
        let k = (self.t.abs() / self.continuation_step).ceil() as usize;
        (0..=k).map(|j| if j == k { self.t } else { self.t * j as f64 / k as f64 }).collect()
    }
}

/// Solution columns on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionGrid {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub ux: Vec<f64>,
    pub uxx: Vec<f64>,
    pub uxxx: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    /// Converged discrete residual of the box scheme at each node.
    pub residual: Vec<f64>,
    /// Newton iterations of the final solve on the configured grid.
    pub newton_iterations: usize,
}

impl SolutionGrid {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn half_width(&self) -> f64 {
        self.x.last().copied().unwrap_or(0.0)
    }

    pub fn spacing(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn max_residual(&self) -> f64 {
        max_abs(&self.residual)
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.x[0]) / self.spacing()).round();
        (i.max(0.0) as usize).min(self.len() - 1)
    }

    fn from_state(t: f64, x: Vec<f64>, y: &[f64], residual: Vec<f64>, newton_iterations: usize) -> Self {
        let col = |c: usize| y.iter().skip(c).step_by(4).copied().collect::<Vec<_>>();
        let n = x.len();
        SolutionGrid {
            t,
            x,
            u: col(0),
            ux: col(1),
            uxx: col(2),
            uxxx: col(3),
            h1: vec![0.0; n],
            h2: vec![0.0; n],
            residual,
            newton_iterations,
        }
    }
}

/// `H1 = x u + u^4/24 - t u^2/2 + u u_x^2/24 + u_x u_xxx/240 - u_xx^2/480`.
pub fn h1_value(x: f64, t: f64, [u, ux, uxx, uxxx]: [f64; 4]) -> f64 {
    x * u + u.powi(4) / 24.0 - t * u * u / 2.0 + u * ux * ux / 24.0 + ux * uxxx / 240.0 - uxx * uxx / 480.0
}

pub fn h2_value(x: f64, t: f64, [u, ux, uxx, uxxx]: [f64; 4]) -> f64 {
    uxxx * uxxx / 1920.0 + u * ux * uxxx / 80.0 + u * u * ux * ux / 16.0 + u.powi(5) / 10.0
        + u.powi(3) * uxx / 24.0
        + u * uxx * uxx / 240.0
        - ux * ux * uxx / 480.0
        - ux / 4.0
        + 1.5 * x * u * u
        + x * uxx / 4.0
        - t * u.powi(3)
        - t * u * uxx / 4.0
        + t * ux * ux / 8.0
}

/// Fills the `H1` and `H2` columns from the stored derivative columns.
pub fn hamiltonians_on_grid(mut sol: SolutionGrid, t: f64) -> SolutionGrid {
    for i in 0..sol.len() {
        let y = [sol.u[i], sol.ux[i], sol.uxx[i], sol.uxxx[i]];
        sol.h1[i] = h1_value(sol.x[i], t, y);
        sol.h2[i] = h2_value(sol.x[i], t, y);
    }
    sol.t = t;
    sol
}

/// `u0 = -6^(1/3) x (x^2 + 1)^(-1/3)` and its first three derivatives.
pub fn initial_guess(x: f64) -> [f64; 4] {
    let c = 6f64.cbrt();
    let q = x * x + 1.0;
    [
        -c * x * q.powf(-1.0 / 3.0),
        -c * (x * x + 3.0) / (3.0 * q.powf(4.0 / 3.0)),
        2.0 * c * x * (x * x + 9.0) / (9.0 * q.powf(7.0 / 3.0)),
        -2.0 * c * (5.0 * x.powi(4) + 90.0 * x * x - 27.0) / (27.0 * q.powf(10.0 / 3.0)),
    ]
}

fn boundary_data(asym: &Asymptotics, kind: BoundaryKind, l: f64, t: f64) -> Result<BoundaryData> {
    match kind {
        BoundaryKind::Pinned => Ok(BoundaryData::pinned(
            [asym.u(-l, t)?, asym.ux_full(-l, t)?],
            [asym.u(l, t)?, asym.ux_full(l, t)?],
        )),
        BoundaryKind::Projected => Ok(BoundaryData {
            left: BoundaryData::projected_rows(asym.jet(-l, t)?, t, -1.0)?,
            right: BoundaryData::projected_rows(asym.jet(l, t)?, t, 1.0)?,
        }),
    }
}

/// Cubic Hermite refinement of a state onto the grid with halved spacing.
fn refine_state(scheme: &BoxScheme, y: &[f64]) -> Vec<f64> {
    let n = scheme.nodes();
    let mut out = Vec::with_capacity(4 * (2 * n - 1));
    let slope = |i: usize| -> [f64; 4] {
        let s = [y[4 * i], y[4 * i + 1], y[4 * i + 2], y[4 * i + 3]];
        [s[1], s[2], s[3], bvp::fourth_derivative(s, scheme.x[i], scheme.t)]
    };
    for i in 0..n {
        out.extend_from_slice(&y[4 * i..4 * i + 4]);
        if i + 1 < n {
            let h = scheme.x[i + 1] - scheme.x[i];
            let (da, db) = (slope(i), slope(i + 1));
            for c in 0..4 {
                out.push(0.5 * (y[4 * i + c] + y[4 * (i + 1) + c]) + h * (da[c] - db[c]) / 8.0);
            }
        }
    }
    out
}

fn solve_at(
    cfg: &SolverConfig,
    asym: &Asymptotics,
    n: usize,
    t: f64,
    guess: Vec<f64>,
) -> Result<(BoxScheme, NewtonOutcome)> {
    let scheme = BoxScheme::uniform(cfg.half_width, n, t, boundary_data(asym, cfg.boundary, cfg.half_width, t)?);
    let out = newton(&scheme, guess, cfg.newton_tol, cfg.max_newton)?;
    Ok((scheme, out))
}

/// Solves on the configured grid by continuation from `t = 0`, then (when
/// enabled) once more on the refined grid, and returns the extrapolated
/// columns with the Hamiltonians filled in.
pub fn solve_bvp(cfg: &SolverConfig) -> Result<SolutionGrid> {
    cfg.validate()?;
    let asym = Asymptotics::with_bound(cfg.boundary_depth, cfg.mu_bound)?;
    let n = cfg.n;
    let scheme0 = BoxScheme::uniform(cfg.half_width, n, 0.0, boundary_data(&asym, cfg.boundary, cfg.half_width, 0.0)?);
    let guess: Vec<f64> = scheme0.x.iter().flat_map(|&x| initial_guess(x)).collect();
    let (mut scheme, mut out) = solve_at(cfg, &asym, n, 0.0, guess)?;

    let mut tc = 0.0;
    let mut step = cfg.continuation_step;
    let mut halvings = 0;
    while tc != cfg.t {
        let remaining = cfg.t - tc;
        let dt = remaining.signum() * step.min(remaining.abs());
        let target = if (remaining - dt).abs() < 1e-14 { cfg.t } else { tc + dt };
        match solve_at(cfg, &asym, n, target, out.y.clone()) {
            Ok((s, o)) => {
                scheme = s;
                out = o;
                tc = target;
            }
            Err(e @ (Pi2Error::NewtonDivergence { .. } | Pi2Error::SingularMatrix(_))) => {
                halvings += 1;
                if halvings > cfg.max_halvings {
                    return Err(e);
                }
                step *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }

    let y = if cfg.richardson {
        let fine_guess = refine_state(&scheme, &out.y);
        let (_, fine) = solve_at(cfg, &asym, 2 * n - 1, cfg.t, fine_guess)?;
        (0..n)
            .flat_map(|i| {
                let (f, c) = (&fine.y, &out.y);
                (0..4).map(move |k| (4.0 * f[8 * i + k] - c[4 * i + k]) / 3.0)
            })
            .collect()
    } else {
        out.y.clone()
    };
    let sol = SolutionGrid::from_state(cfg.t, scheme.x.clone(), &y, out.residual, out.iterations);
    Ok(hamiltonians_on_grid(sol, cfg.t))
}

/// Maxima of the identity residuals over interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub t: f64,
    pub delta: f64,
    /// `max |dH1/dx - u|`.
    pub h1_x: f64,
    /// `max |dH1/dt + u^2/2 + u_xx/12|`.
    pub h1_t: f64,
    /// `max |u_t + u u_x + u_xxx/12|`.
    pub kdv: f64,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.h1_x.max(self.h1_t).max(self.kdv)
    }
}

fn same_grid(a: &SolutionGrid, b: &SolutionGrid) -> Result<()> {
    if a.x.len() != b.x.len() || a.x.iter().zip(&b.x).any(|(p, q)| (p - q).abs() > 1e-12 * p.abs().max(1.0)) {
        return Err(Pi2Error::GridMismatch(format!("{} vs {} nodes or shifted abscissae", a.len(), b.len())));
    }
    Ok(())
}

/// `x`-derivatives by fourth-order central differences of the `H1` column
/// and `t`-derivatives by central differences over `delta`.
pub fn identity_residuals(
    sol_t: &SolutionGrid,
    sol_plus: &SolutionGrid,
    sol_minus: &SolutionGrid,
    delta: f64,
) -> Result<IdentityReport> {
    same_grid(sol_t, sol_plus)?;
    same_grid(sol_t, sol_minus)?;
    if sol_t.len() < 5 {
        return Err(Pi2Error::GridMismatch("fewer than five nodes".into()));
    }
    let h = sol_t.spacing();
    let (mut h1_x, mut h1_t, mut kdv) = (0.0f64, 0.0f64, 0.0f64);
    for i in 2..sol_t.len() - 2 {
        let f = &sol_t.h1;
        let dx = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
        h1_x = h1_x.max((dx - sol_t.u[i]).abs());
        let u = sol_t.u[i];
        let dt = (sol_plus.h1[i] - sol_minus.h1[i]) / (2.0 * delta);
        h1_t = h1_t.max((dt + u * u / 2.0 + sol_t.uxx[i] / 12.0).abs());
        let ut = (sol_plus.u[i] - sol_minus.u[i]) / (2.0 * delta);
        kdv = kdv.max((ut + u * sol_t.ux[i] + sol_t.uxxx[i] / 12.0).abs());
    }
    Ok(IdentityReport { t: sol_t.t, delta, h1_x, h1_t, kdv })
}

/// Solves at `t - delta`, `t` and `t + delta` in parallel and reports the
/// identity residuals.
pub fn verify_identities(cfg: &SolverConfig, delta: f64) -> Result<IdentityReport> {
    let cfgs = [cfg.t - delta, cfg.t, cfg.t + delta].map(|t| SolverConfig { t, ..cfg.clone() });
    let (m, (c, p)) = rayon::join(
        || solve_bvp(&cfgs[0]),
        || rayon::join(|| solve_bvp(&cfgs[1]), || solve_bvp(&cfgs[2])),
    );
    identity_residuals(&c?, &p?, &m?, delta)
}

/// Jacobian gradient check on `n` nodes at the initial guess.
pub fn jacobian_check(n: usize, half_width: f64, t: f64) -> Result<f64> {
    let asym = Asymptotics::new(2)?;
    let scheme = BoxScheme::uniform(half_width, n, t, boundary_data(&asym, BoundaryKind::Projected, half_width, t)?);
    let y: Vec<f64> = scheme.x.iter().flat_map(|&x| initial_guess(x)).collect();
    Ok(bvp::jacobian_deviation(&scheme, &y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonians_vanish_on_zero_columns() {
        for x in [-3.0, 0.0, 2.5] {
            assert_eq!(h1_value(x, 0.7, [0.0; 4]), 0.0);
            assert_eq!(h2_value(x, 0.7, [0.0; 4]), 0.0);
        }
    }

    #[test]
    fn initial_guess_derivatives() {
        let h = 1e-5;
        for x in [-2.0, 0.3, 4.0] {
            let (a, b, c) = (initial_guess(x - h), initial_guess(x), initial_guess(x + h));
            for k in 0..3 {
                let fd = (c[k] - a[k]) / (2.0 * h);
                assert!((fd - b[k + 1]).abs() < 1e-8, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn config_rejects_bad_grids_and_large_mu() {
        assert!(SolverConfig { n: 400, ..SolverConfig::default() }.validate().is_err());
        assert!(SolverConfig { n: 101, ..SolverConfig::default() }.validate().is_err());
        let e = SolverConfig::at(3.0, 12.0).validate().unwrap_err();
        assert!(matches!(e, Pi2Error::Inadmissible { .. }));
    }

    #[test]
    fn continuation_schedule() {
        let s = SolverConfig::at(0.25, 12.0).continuation_steps();
        assert_eq!(s.len(), 4);
        assert_eq!(*s.last().unwrap(), 0.25);
        assert!(s.windows(2).all(|w| (w[1] - w[0]).abs() <= 0.1 + 1e-15));
        assert_eq!(SolverConfig::at(0.0, 12.0).continuation_steps(), vec![0.0]);
    }
}
