//! Behaviour of the boundary-value solver on the default problem.

use pi2_core::asym::Asymptotics;
use pi2_core::solver::{
    hamiltonians_on_grid, identity_residuals, read_csv, solve_bvp, write_csv, SolutionGrid, SolverConfig,
};
use pi2_core::tolerances::{BVP_PROBE_FRACTION, H2_RELATIVE};

fn solve(cfg: SolverConfig) -> SolutionGrid {
    solve_bvp(&cfg).expect("solver converges")
}

#[test]
fn zero_time_profile_changes_sign_once() {
    let sol = solve(SolverConfig::default());
    let u0 = sol.u[sol.nearest(0.0)];
    assert!(u0.is_finite() && u0 < 0.0, "u(0) = {u0}");
    assert!(sol.u[0] > 0.0 && sol.u[sol.len() - 1] < 0.0);
    let changes = sol.u.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert_eq!(changes, 1);
}

#[test]
fn plain_box_scheme_is_second_order() {
    let u0: Vec<f64> = [1001, 2001, 4001]
        .iter()
        .map(|&n| {
            let sol = solve(SolverConfig { n, richardson: false, ..SolverConfig::default() });
            sol.u[sol.nearest(0.0)]
        })
        .collect();
    let ratio = (u0[0] - u0[1]) / (u0[1] - u0[2]);
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn second_hamiltonian_follows_its_expansion() {
    let cfg = SolverConfig::default();
    let sol = solve(cfg.clone());
    let i = sol.nearest(BVP_PROBE_FRACTION * cfg.half_width);
    let expected = Asymptotics::new(0).unwrap().h2(sol.x[i], 0.0).unwrap().value;
    let rel = (sol.h2[i] - expected).abs() / expected.abs();
    assert!(rel <= H2_RELATIVE, "relative deviation {rel}");
}

fn expansion_grid(t: f64) -> SolutionGrid {
    let asym = Asymptotics::new(2).unwrap();
    let x: Vec<f64> = (0..=500).map(|i| 2.0 + 10.0 * i as f64 / 500.0).collect();
    let jets: Vec<[f64; 4]> = x.iter().map(|&x| asym.jet(x, t).unwrap()).collect();
    let n = x.len();
    let sol = SolutionGrid {
        t,
        u: jets.iter().map(|j| j[0]).collect(),
        ux: jets.iter().map(|j| j[1]).collect(),
        uxx: jets.iter().map(|j| j[2]).collect(),
        uxxx: jets.iter().map(|j| j[3]).collect(),
        h1: vec![0.0; n],
        h2: vec![0.0; n],
        residual: vec![0.0; n],
        newton_iterations: 0,
        x,
    };
    hamiltonians_on_grid(sol, t)
}

#[test]
fn truncated_expansion_misses_the_identities_the_solution_satisfies() {
    let delta = 1e-3;
    let synthetic =
        identity_residuals(&expansion_grid(0.0), &expansion_grid(delta), &expansion_grid(-delta), delta).unwrap();
    let cfg = SolverConfig::default();
    let [m, c, p] = [-delta, 0.0, delta].map(|t| solve(SolverConfig { t, ..cfg.clone() }));
    let solved = identity_residuals(&c, &p, &m, delta).unwrap();
    assert!(synthetic.h1_x > 10.0 * solved.h1_x, "expansion {} vs solver {}", synthetic.h1_x, solved.h1_x);
}

#[test]
fn origin_value_converges_in_the_half_width() {
    let at = |l: f64| {
        let sol = solve(SolverConfig::at(0.0, l));
        sol.u[sol.nearest(0.0)]
    };
    let reference = at(20.0);
    let errs: Vec<f64> = [8.0, 12.0, 16.0].iter().map(|&l| (at(l) - reference).abs()).collect();
    assert!(errs[0] < 1e-8, "{errs:?}");
    assert!(errs[1] <= errs[0] && errs[2] <= errs[1].max(1e-14), "{errs:?}");
}

#[test]
fn csv_round_trip_is_exact() {
    let sol = solve(SolverConfig { n: 401, ..SolverConfig::default() });
    let mut buf = Vec::new();
    write_csv(&sol, &mut buf).unwrap();
    let back = read_csv(buf.as_slice(), sol.t).unwrap();
    assert_eq!(back.x, sol.x);
    assert_eq!(back.u, sol.u);
    assert_eq!(back.uxxx, sol.uxxx);
    assert_eq!(back.h2, sol.h2);
    assert_eq!(back.residual, sol.residual);
    let header = String::from_utf8(buf).unwrap();
    assert!(header.starts_with("x,u,ux,uxx,uxxx,H1,H2,residual\n"));
}

#[test]
fn nonzero_times_converge_through_continuation() {
    for t in [0.5, -0.5] {
        let sol = solve(SolverConfig::at(t, 16.0));
        assert!(sol.max_residual() <= 1e-10, "t={t}: {}", sol.max_residual());
    }
}
