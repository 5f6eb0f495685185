//! Large-`|x|` series in powers of `s^(1/3)`, `s = |x|`, at fixed `t`.
//!
//! One [`ThirdsSeries`] describes one side of the real line (a [`Branch`]);
//! the variable is always `s = |x| > 0` and `d/dx = sign(x) d/ds`.

use std::collections::BTreeMap;

use crate::algebra::RationalFunction;
use crate::branch::{z_series_small_mu, Branch};
use crate::error::{Pi2Error, Result};
use crate::expansion::{h_expansion_coeffs, shared_table};

/// `sum_{n > err} c_n s^(n/3) + O(s^(err/3))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdsSeries {
    coeffs: BTreeMap<i32, f64>,
    err: i32,
}

impl ThirdsSeries {
    /// The zero series with remainder `O(s^(err/3))`.
    pub fn zero(err: i32) -> Self {
        ThirdsSeries { coeffs: BTreeMap::new(), err }
    }

    /// `c s^(n/3)` known exactly (remainder pushed arbitrarily far down).
    pub fn monomial(c: f64, n: i32) -> Self {
        let mut s = Self::zero(i32::MIN / 4);
        s.add_term(n, c);
        s
    }

    pub fn add_term(&mut self, n: i32, c: f64) {
        if n > self.err && c != 0.0 {
            *self.coeffs.entry(n).or_insert(0.0) += c;
        }
    }

    /// Exponent numerator of the remainder.
    pub fn err(&self) -> i32 {
        self.err
    }

    pub fn coeff(&self, n: i32) -> f64 {
        self.coeffs.get(&n).copied().unwrap_or(0.0)
    }

    /// Nonzero `(n, c_n)` pairs, largest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs.iter().rev().map(|(&n, &c)| (n, c)).filter(|&(_, c)| c != 0.0)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn leading(&self) -> Option<i32> {
        self.terms().next().map(|(n, _)| n)
    }

    /// Drops everything at or below `err` and records the new remainder.
    pub fn truncate(&self, err: i32) -> Self {
        let err = err.max(self.err);
        ThirdsSeries { coeffs: self.coeffs.iter().filter(|(&n, _)| n > err).map(|(&n, &c)| (n, c)).collect(), err }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.err.max(rhs.err));
        for (n, c) in self.terms().chain(rhs.terms()) {
            out.add_term(n, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        ThirdsSeries { coeffs: self.coeffs.iter().map(|(&n, &c)| (n, c * k)).collect(), err: self.err }
    }

    /// Multiplication by `s^(m/3)`.
    pub fn shift(&self, m: i32) -> Self {
        ThirdsSeries { coeffs: self.coeffs.iter().map(|(&n, &c)| (n + m, c)).collect(), err: self.err + m }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let va = self.leading().unwrap_or(self.err);
        let vb = rhs.leading().unwrap_or(rhs.err);
        let err = (self.err + vb).max(rhs.err + va);
        let mut out = Self::zero(err);
        for (n, c) in self.terms() {
            for (m, d) in rhs.terms() {
                out.add_term(n + m, c * d);
            }
        }
        out
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::monomial(1.0, 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/dx` on the side with the given branch: `sign * d/ds`.
    pub fn dx(&self, side: Branch) -> Self {
        let sg = side.sign();
        let mut out = Self::zero(self.err - 3);
        for (n, c) in self.terms() {
            out.add_term(n - 3, sg * c * n as f64 / 3.0);
        }
        out
    }

    pub fn eval(&self, s: f64) -> f64 {
        let r = s.cbrt();
        self.terms().map(|(n, c)| c * r.powi(n)).sum()
    }

    /// Removes coefficients of exponents `>= -3` whose magnitude is below
    /// `tol`; they are treated as exact cancellations.
    pub fn prune_cancelled(&self, tol: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&n, &c)| n < -3 || c.abs() > tol)
            .map(|(&n, &c)| (n, c))
            .collect();
        ThirdsSeries { coeffs, err: self.err }
    }

    /// `int_L^inf` of the series, term by term.
    pub fn tail_integral(&self, l: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (n, c) in self.terms() {
            if n >= -3 {
                return Err(Pi2Error::DivergentTail { numerator: n, coefficient: c });
            }
            let p = n as f64 / 3.0 + 1.0;
            sum += c * l.cbrt().powi(n + 3) / (-p);
        }
        Ok(sum)
    }
}

/// Truncated power series in `mu` with binary64 coefficients.
fn ps_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn ps_div(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = a.get(k).copied().unwrap_or(0.0);
        for i in 1..=k.min(b.len().saturating_sub(1)) {
            acc -= b[i] * out[k - i];
        }
        out[k] = acc / b[0];
    }
    out
}

fn poly_compose(p: &crate::algebra::Poly, z: &[f64], n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    for c in p.coeffs().iter().rev() {
        acc = ps_mul(&acc, z, n);
        acc[0] += crate::algebra::rational_to_f64(c);
    }
    acc
}

/// Taylor coefficients in `mu` of `f(z(mu))` through `mu^(n-1)`.
pub fn compose_with_root(f: &RationalFunction, z: &[f64], n: usize) -> Vec<f64> {
    ps_div(&poly_compose(f.numerator(), z, n), &poly_compose(f.denominator(), z, n), n)
}

/// Taylor coefficients of `z_+-(mu)` through `mu^(n-1)`.
pub fn root_series(side: Branch, n: usize) -> Vec<f64> {
    z_series_small_mu(side, n.saturating_sub(1)).iter().map(|t| t.value()).collect()
}

/// Series of `u` on one side, built from `z_+-` and `e_1..e_K`, with
/// remainder `O(s^((1 - 7(K+1))/3))`.
pub fn u_series(side: Branch, t: f64, k: usize) -> Result<ThirdsSeries> {
    let err = 1 - 7 * (k as i32 + 1);
    let n_mu = ((1 - err) / 2 + 1) as usize;
    let z = root_series(side, n_mu);
    let mut out = ThirdsSeries::zero(err);
    for (j, a) in z.iter().enumerate() {
        out.add_term(1 - 2 * j as i32, 0.5 * a * t.powi(j as i32));
    }
    if k > 0 {
        let table = shared_table(side, k)?;
        for kk in 1..=k {
            let ek = compose_with_root(table.e(kk)?, &z, n_mu);
            for (j, c) in ek.iter().enumerate() {
                out.add_term(1 - 7 * kk as i32 - 2 * j as i32, c * t.powi(j as i32));
            }
        }
    }
    Ok(out)
}

/// `x` on the given side as a series in `s`.
pub fn x_series(side: Branch) -> ThirdsSeries {
    ThirdsSeries::monomial(side.sign(), 3)
}

/// Series of `H1` obtained by substituting [`u_series`] into the Hamiltonian.
pub fn h1_series_from_u(side: Branch, t: f64, k: usize) -> Result<ThirdsSeries> {
    let u = u_series(side, t, k)?;
    let ux = u.dx(side);
    let uxx = ux.dx(side);
    let uxxx = uxx.dx(side);
    let x = x_series(side);
    let u2 = u.mul(&u);
    Ok(x.mul(&u)
        .add(&u2.mul(&u2).scale(1.0 / 24.0))
        .sub(&u2.scale(t / 2.0))
        .add(&u.mul(&ux).mul(&ux).scale(1.0 / 24.0))
        .add(&ux.mul(&uxxx).scale(1.0 / 240.0))
        .sub(&uxx.mul(&uxx).scale(1.0 / 480.0)))
}

/// Series of `H2` obtained by substituting [`u_series`] into the Hamiltonian.
pub fn h2_series_from_u(side: Branch, t: f64, k: usize) -> Result<ThirdsSeries> {
    let u = u_series(side, t, k)?;
    let ux = u.dx(side);
    let uxx = ux.dx(side);
    let uxxx = uxx.dx(side);
    let x = x_series(side);
    let u2 = u.mul(&u);
    let u3 = u2.mul(&u);
    let ux2 = ux.mul(&ux);
    Ok(uxxx.mul(&uxxx).scale(1.0 / 1920.0)
        .add(&u.mul(&ux).mul(&uxxx).scale(1.0 / 80.0))
        .add(&u2.mul(&ux2).scale(1.0 / 16.0))
        .add(&u3.mul(&u2).scale(1.0 / 10.0))
        .add(&u3.mul(&uxx).scale(1.0 / 24.0))
        .add(&u.mul(&uxx).mul(&uxx).scale(1.0 / 240.0))
        .sub(&ux2.mul(&uxx).scale(1.0 / 480.0))
        .sub(&ux.scale(0.25))
        .add(&x.mul(&u2).scale(1.5))
        .add(&x.mul(&uxx).scale(0.25))
        .sub(&u3.scale(t))
        .sub(&u.mul(&uxx).scale(t / 4.0))
        .add(&ux2.scale(t / 8.0)))
}

/// Two-term expansion `a1(z) s^(4/3) + b1(z) s^(-1)` of `H1` expanded in
/// `mu = t s^(-2/3)`, remainder `O(s^(-10/3))`.
pub fn h1_series_two_term(side: Branch, t: f64) -> ThirdsSeries {
    let err = -10;
    let n_mu = 8;
    let z = root_series(side, n_mu);
    let c = h_expansion_coeffs(side);
    let a = compose_with_root(&c.h1_leading, &z, n_mu);
    let b = compose_with_root(&c.h1_correction, &z, n_mu);
    let mut out = ThirdsSeries::zero(err);
    for j in 0..n_mu {
        let tj = t.powi(j as i32);
        out.add_term(4 - 2 * j as i32, a[j] * tj);
        out.add_term(-3 - 2 * j as i32, b[j] * tj);
    }
    out
}

/// `x^(p/3)` under the real cube-root convention, on one side.
pub fn x_thirds_power(side: Branch, p: i32) -> ThirdsSeries {
    let sg = if p.rem_euclid(2) == 0 { 1.0 } else { side.sign() };
    ThirdsSeries::monomial(sg, p)
}

/// `x / (36 (x^2 + 1))` expanded for large `s`, down to the remainder `err`.
pub fn damped_inverse_series(side: Branch, err: i32) -> ThirdsSeries {
    let mut out = ThirdsSeries::zero(err);
    let mut i = 0;
    loop {
        let n = -3 - 6 * i;
        if n <= err {
            break;
        }
        let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
        out.add_term(n, side.sign() * sgn / 36.0);
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_series_at_zero_time() {
        let u = u_series(Branch::Plus, 0.0, 1).unwrap();
        assert!((u.coeff(1) + 6f64.cbrt()).abs() < 1e-14);
        assert!((u.coeff(-6) - 1.0 / 36.0).abs() < 1e-15);
        let um = u_series(Branch::Minus, 0.0, 1).unwrap();
        assert!((um.coeff(1) - 6f64.cbrt()).abs() < 1e-14);
        assert!((um.coeff(-6) - 1.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn u_series_fixed_time_terms() {
        let t = 0.7;
        let u = u_series(Branch::Plus, t, 1).unwrap();
        let c6 = 6f64.cbrt();
        assert!((u.coeff(-1) + 2.0 / c6 * t).abs() < 1e-14);
        assert!(u.coeff(-3).abs() < 1e-15);
        assert!((u.coeff(-5) - 2.0 * c6 / 27.0 * t.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn h1_forms_agree() {
        for side in [Branch::Plus, Branch::Minus] {
            for t in [0.0, 0.5, -0.5] {
                let a = h1_series_from_u(side, t, 1).unwrap();
                let b = h1_series_two_term(side, t);
                for n in -9..=4 {
                    assert!((a.coeff(n) - b.coeff(n)).abs() < 1e-12, "side {side} t {t} n {n}");
                }
            }
        }
    }

    #[test]
    fn tail_integral_of_inverse_square() {
        let s = ThirdsSeries::monomial(1.0 / 36.0, -6);
        assert!((s.tail_integral(16.0).unwrap() - 1.0 / (36.0 * 16.0)).abs() < 1e-16);
        assert!(ThirdsSeries::monomial(1.0, -3).tail_integral(2.0).is_err());
    }

    #[test]
    fn derivative_and_products() {
        let s = ThirdsSeries::monomial(2.0, 3);
        assert_eq!(s.dx(Branch::Minus).coeff(0), -2.0);
        let p = s.mul(&ThirdsSeries::monomial(3.0, -6));
        assert_eq!(p.coeff(-3), 6.0);
    }
}
