//! Numerical evaluation of the large-`|x|` expansion of `u` and of the
//! Hamiltonians.
//!
//! Fractional powers follow the real cube-root convention: `x^(1/3)` is
//! negative for `x < 0` and `x^(p/3) = (x^(1/3))^p`.

pub mod thirds;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::RationalFunction;
use crate::branch::{AdmissibleMu, Branch, DEFAULT_MU_BOUND};
use crate::error::{Pi2Error, Result};
use crate::expansion::{h_expansion_coeffs, shared_table, ExpansionTable, HamiltonianCoefficients};

pub use thirds::ThirdsSeries;

/// `x^(p/3)` with the real cube root.
pub fn thirds_pow(x: f64, p: i32) -> f64 {
    x.cbrt().powi(p)
}

/// Evaluation point resolved into branch, `mu` and root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub t: f64,
    pub branch: Branch,
    pub mu: f64,
    pub z: f64,
}

/// Value of a truncated expansion together with its individual terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    #[serde(flatten)]
    pub point: Point,
    pub value: f64,
    pub terms: Vec<f64>,
}

struct Side {
    table: Option<Arc<ExpansionTable>>,
    de: Vec<RationalFunction>,
    h: HamiltonianCoefficients,
}

/// Evaluator of the expansion truncated after `e_K`.
pub struct Asymptotics {
    k: usize,
    mu_bound: f64,
    plus: Side,
    minus: Side,
}

impl Asymptotics {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_bound(k, DEFAULT_MU_BOUND)
    }

    pub fn with_bound(k: usize, mu_bound: f64) -> Result<Self> {
        let side = |b: Branch| -> Result<Side> {
            let table = if k > 0 { Some(shared_table(b, k)?) } else { None };
            let de = match &table {
                Some(t) => (1..=k).map(|j| Ok(t.e(j)?.derivative())).collect::<Result<_>>()?,
                None => Vec::new(),
            };
            Ok(Side { table, de, h: h_expansion_coeffs(b) })
        };
        Ok(Asymptotics { k, mu_bound, plus: side(Branch::Plus)?, minus: side(Branch::Minus)? })
    }

    pub fn depth(&self) -> usize {
        self.k
    }

    fn side(&self, b: Branch) -> &Side {
        match b {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }

    pub fn point(&self, x: f64, t: f64) -> Result<Point> {
        let branch = Branch::of_x(x).ok_or(Pi2Error::ZeroAbscissa)?;
        let s = x.abs();
        let mu = t * thirds_pow(s, -2);
        let z = branch.root(&AdmissibleMu::with_bound(mu, self.mu_bound)?);
        Ok(Point { x, t, branch, mu, z })
    }

    fn e_values(&self, p: &Point) -> Result<Vec<f64>> {
        match &self.side(p.branch).table {
            Some(t) => (1..=self.k).map(|j| t.e(j)?.eval_f64(p.z)).collect(),
            None => Ok(Vec::new()),
        }
    }

    /// `|x|^(1/3) [z/2 + sum_k e_k |x|^(-7k/3)]`.
    pub fn u_terms(&self, x: f64, t: f64) -> Result<Evaluation> {
        let p = self.point(x, t)?;
        let s = x.abs();
        let mut terms = vec![thirds_pow(s, 1) * p.z / 2.0];
        for (j, e) in self.e_values(&p)?.into_iter().enumerate() {
            terms.push(e * thirds_pow(s, 1 - 7 * (j as i32 + 1)));
        }
        let value = terms.iter().sum();
        Ok(Evaluation { point: p, value, terms })
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.u_terms(x, t)?.value)
    }

    /// Leading behaviour of `u_x`: `-8 |x|^(-2/3) / (z^2 - 8 mu)`.
    pub fn ux(&self, x: f64, t: f64) -> Result<f64> {
        let p = self.point(x, t)?;
        Ok(-8.0 * thirds_pow(x.abs(), -2) / (p.z * p.z - 8.0 * p.mu))
    }

    /// Exact `x`-derivative of the truncated expansion.
    pub fn ux_full(&self, x: f64, t: f64) -> Result<f64> {
        let p = self.point(x, t)?;
        let s = x.abs();
        let gap = p.z * p.z - 8.0 * p.mu;
        // d mu / ds and d z / d mu
        let dmu = -2.0 / 3.0 * t * thirds_pow(s, -5);
        let dz = 8.0 * p.z / gap * dmu;
        let mut du = thirds_pow(s, -2) / 3.0 * p.z / 2.0 + thirds_pow(s, 1) * dz / 2.0;
        let side = self.side(p.branch);
        for (j, e) in self.e_values(&p)?.into_iter().enumerate() {
            let n = 1 - 7 * (j as i32 + 1);
            let de = side.de[j].eval_f64(p.z)?;
            du += n as f64 / 3.0 * e * thirds_pow(s, n - 3) + de * dz * thirds_pow(s, n);
        }
        Ok(p.branch.sign() * du)
    }

    /// `(u, u_x, u_xx, u_xxx)` of the truncated expansion; the last two are
    /// fourth-order difference quotients of [`Asymptotics::ux_full`].
    pub fn jet(&self, x: f64, t: f64) -> Result<[f64; 4]> {
        let h = 0.05 * x.abs().cbrt();
        let f = |k: f64| self.ux_full(x + k * h, t);
        let (m2, m1, p0, p1, p2) = (f(-2.0)?, f(-1.0)?, f(0.0)?, f(1.0)?, f(2.0)?);
        Ok([
            self.u(x, t)?,
            p0,
            (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h),
            (-p2 + 16.0 * p1 - 30.0 * p0 + 16.0 * m1 - m2) / (12.0 * h * h),
        ])
    }

    /// `a1 |x|^(4/3) + b1 |x|^(-1)`.
    pub fn h1(&self, x: f64, t: f64) -> Result<Evaluation> {
        let p = self.point(x, t)?;
        let h = &self.side(p.branch).h;
        let s = x.abs();
        let terms = vec![h.h1_leading.eval_f64(p.z)? * thirds_pow(s, 4), h.h1_correction.eval_f64(p.z)? / s];
        Ok(Evaluation { point: p, value: terms.iter().sum(), terms })
    }

    /// `a2 |x|^(5/3) + b2 |x|^(-2/3)`.
    pub fn h2(&self, x: f64, t: f64) -> Result<Evaluation> {
        let p = self.point(x, t)?;
        let h = &self.side(p.branch).h;
        let s = x.abs();
        let terms = vec![
            h.h2_leading.eval_f64(p.z)? * thirds_pow(s, 5),
            h.h2_correction.eval_f64(p.z)? * thirds_pow(s, -2),
        ];
        Ok(Evaluation { point: p, value: terms.iter().sum(), terms })
    }
}

/// `u ~ -6^(1/3) x^(1/3) - 2 6^(-1/3) t x^(-1/3) + (2 6^(1/3)/27) t^3 x^(-5/3) + 1/(36 x^2)`.
pub fn fixed_t_series_u(x: f64, t: f64) -> f64 {
    let c = 6f64.cbrt();
    -c * thirds_pow(x, 1) - 2.0 / c * t * thirds_pow(x, -1) + 2.0 * c / 27.0 * t.powi(3) * thirds_pow(x, -5)
        + 1.0 / (36.0 * x * x)
}

/// `H1 ~ -(3/4) 6^(1/3) x^(4/3) - 3 6^(-1/3) t x^(2/3) - t^2 - (6^(1/3)/9) t^3 x^(-2/3)`.
pub fn fixed_t_series_h1(x: f64, t: f64) -> f64 {
    let c = 6f64.cbrt();
    -0.75 * c * thirds_pow(x, 4) - 3.0 / c * t * thirds_pow(x, 2) - t * t - c / 9.0 * t.powi(3) * thirds_pow(x, -2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_value_at_large_x() {
        let a = Asymptotics::new(0).unwrap();
        let v = a.u(1e6, 0.0).unwrap();
        assert!((v + 6f64.cbrt() * 100.0).abs() < 1e-10);
        assert!((a.u(-1e6, 0.0).unwrap() - 6f64.cbrt() * 100.0).abs() < 1e-10);
    }

    #[test]
    fn first_correction_at_zero_time() {
        let a1 = Asymptotics::new(1).unwrap();
        let ev = a1.u_terms(1e3, 0.0).unwrap();
        assert!((ev.terms[1] - 1e-6 / 36.0).abs() < 1e-20);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let a = Asymptotics::new(2).unwrap();
        for (x, t) in [(7.0, 0.5), (-9.0, 1.0), (12.0, -2.0)] {
            let h = 1e-4;
            let fd = (a.u(x + h, t).unwrap() - a.u(x - h, t).unwrap()) / (2.0 * h);
            assert!((fd - a.ux_full(x, t).unwrap()).abs() < 1e-8, "x={x} t={t}");
        }
    }

    #[test]
    fn fixed_time_series_agree() {
        let a = Asymptotics::new(1).unwrap();
        for (x, t) in [(1e3f64, 0.3f64), (-1e3, 0.3), (5e3, -1.0)] {
            let tol = 0.5 * t.powi(4) * thirds_pow(x.abs(), -7) + 1e-13;
            assert!((a.u(x, t).unwrap() - fixed_t_series_u(x, t)).abs() < tol, "{x} {t}");
            let h = a.h1(x, t).unwrap().value;
            assert!((h - fixed_t_series_h1(x, t)).abs() < 1e-3, "{x} {t}");
        }
    }

    #[test]
    fn rejects_zero_and_large_mu() {
        let a = Asymptotics::new(0).unwrap();
        assert!(matches!(a.u(0.0, 0.0), Err(Pi2Error::ZeroAbscissa)));
        assert!(matches!(a.u(1.0, 5.0), Err(Pi2Error::Inadmissible { .. })));
    }
}
