//! Regularized total integrals over solver output.

use pi2_core::integrals::{counterterms, simpson, total_integral, Counterterm, Quantity};
use pi2_core::solver::{solve_bvp, SolutionGrid, SolverConfig};

fn solve(t: f64, l: f64) -> SolutionGrid {
    solve_bvp(&SolverConfig::at(t, l)).expect("solver converges")
}

/// Integral over `[a, b]` with `0 < a < b`, computed in the variable `s = x^(1/3)`.
fn quadrature(term: &Counterterm, a: f64, b: f64) -> f64 {
    let n = 20_000;
    let (sa, sb) = (a.cbrt(), b.cbrt());
    let h = (sb - sa) / n as f64;
    let f: Vec<f64> = (0..=n)
        .map(|i| {
            let s = sa + h * i as f64;
            term.eval(s * s * s) * 3.0 * s * s
        })
        .collect();
    simpson(&f, h)
}

#[test]
fn counterterm_closed_forms_match_quadrature() {
    for q in Quantity::ALL {
        for t in [0.0, 0.5, -0.5] {
            for term in counterterms(q, t) {
                for (a, b) in [(0.5, 3.0), (1.0, 16.0)] {
                    let (exact, approx) = (term.integral(a, b), quadrature(&term, a, b));
                    assert!((exact - approx).abs() <= 1e-10 * (1.0 + exact.abs()), "{q} t={t} {term:?}: {exact} vs {approx}");
                    let mirrored = term.integral(-b, -a);
                    let direct = quadrature(&term, a, b);
                    let odd = (term.eval(-a) + term.eval(a)).abs() < 1e-12;
                    let expected = if odd { -direct } else { direct };
                    assert!((mirrored - expected).abs() <= 1e-10 * (1.0 + expected.abs()), "{q} t={t} {term:?} mirrored");
                }
            }
        }
    }
}

#[test]
fn totals_shrink_as_the_window_grows() {
    let sols: Vec<SolutionGrid> = [12.0, 16.0, 20.0].iter().map(|&l| solve(0.0, l)).collect();
    for q in [Quantity::H1, Quantity::U2, Quantity::Xu] {
        let totals: Vec<f64> = sols.iter().map(|s| total_integral(q, 0.0, s, 1).unwrap().total.abs()).collect();
        assert!(totals[1] < totals[0] && totals[2] < totals[1], "{q}: {totals:?}");
    }
}

#[test]
fn deeper_tails_shrink_totals() {
    let sol = solve(0.0, 16.0);
    for q in [Quantity::H1, Quantity::U2, Quantity::Xu] {
        let shallow = total_integral(q, 0.0, &sol, 1).unwrap().total.abs();
        let deep = total_integral(q, 0.0, &sol, 2).unwrap().total.abs();
        assert!(deep < 0.1 * shallow, "{q}: K=1 {shallow:e}, K=2 {deep:e}");
    }
}

#[test]
fn totals_lie_within_their_estimates_off_zero_time() {
    for t in [0.5, -0.5] {
        let sol = solve(t, 16.0);
        for q in Quantity::ALL {
            let r = total_integral(q, t, &sol, q.default_tail_order()).unwrap();
            assert!(r.total.abs() <= r.error_estimate, "{q} t={t}: {} > {}", r.total, r.error_estimate);
        }
    }
}

#[test]
fn time_mismatch_is_rejected() {
    let sol = solve_bvp(&SolverConfig { n: 401, ..SolverConfig::default() }).unwrap();
    assert!(total_integral(Quantity::U, 0.5, &sol, 1).is_err());
}
