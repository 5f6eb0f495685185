//! Box-scheme discretization of the first-order system for
//! `(u, u', u'', u''')` and its Newton iteration.

use super::banded::BandedMatrix;
use crate::error::{Pi2Error, Result};

/// Components per node.
pub const COMPONENTS: usize = 4;
const KL: usize = 5;
const KU: usize = 5;

/// `u''''` as a function of the state.
pub fn fourth_derivative(y: [f64; 4], x: f64, t: f64) -> f64 {
    let [u, u1, u2, _] = y;
    -10.0 * u1 * u1 - 20.0 * u * u2 - 40.0 * (u * u * u - 6.0 * t * u + 6.0 * x)
}

/// Gradient of [`fourth_derivative`] in the state.
fn fourth_derivative_gradient(y: [f64; 4], t: f64) -> [f64; 4] {
    let [u, u1, u2, _] = y;
    [-20.0 * u2 - 40.0 * (3.0 * u * u - 6.0 * t), -20.0 * u1, -20.0 * u, 0.0]
}

/// Linear condition `coeffs . (u, u', u'', u''') = rhs` at one end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRow {
    pub coeffs: [f64; 4],
    pub rhs: f64,
}

impl BoundaryRow {
    fn apply(&self, y: &[f64]) -> f64 {
        self.coeffs.iter().zip(y).map(|(c, v)| c * v).sum::<f64>() - self.rhs
    }
}

/// Two conditions at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub left: [BoundaryRow; 2],
    pub right: [BoundaryRow; 2],
}

impl BoundaryData {
    /// `u` and `u'` fixed at both ends.
    pub fn pinned(left: [f64; 2], right: [f64; 2]) -> Self {
        let row = |k: usize, v: f64| {
            let mut coeffs = [0.0; 4];
            coeffs[k] = 1.0;
            BoundaryRow { coeffs, rhs: v }
        };
        BoundaryData { left: [row(0, left[0]), row(1, left[1])], right: [row(0, right[0]), row(1, right[1])] }
    }

    /// Removes from `Y - jet` the two linearized modes that grow away from
    /// the interval at the given end, leaving the two that decay outward.
    ///
    /// Modes are those of the frozen-coefficient linearization
    /// `v'''' + 20 u v'' + (120 u^2 - 240 t + 20 u'') v = 0`; the kept pair
    /// `lambda, conj(lambda)` is imposed through
    /// `(D^2 - s D + p) dY = 0` and its derivative, `s = 2 Re lambda`,
    /// `p = |lambda|^2`.
    pub fn projected_rows(jet: [f64; 4], t: f64, outward: f64) -> Result<[BoundaryRow; 2]> {
        let [u, _, uxx, _] = jet;
        let c0 = 120.0 * u * u - 240.0 * t + 20.0 * uxx;
        if c0 <= 100.0 * u * u {
            return Err(Pi2Error::Config(format!("boundary linearization has real modes (u={u}, t={t})")));
        }
        let p = c0.sqrt();
        // Re of sqrt(-10u + i sqrt(c0 - 100u^2)); outward decay means Re lambda * outward < 0
        let re = ((p - 10.0 * u) / 2.0).sqrt();
        let s = -2.0 * re * outward;
        let d = |k: usize| jet[k];
        Ok([
            BoundaryRow { coeffs: [p, -s, 1.0, 0.0], rhs: p * d(0) - s * d(1) + d(2) },
            BoundaryRow { coeffs: [0.0, p, -s, 1.0], rhs: p * d(1) - s * d(2) + d(3) },
        ])
    }
}

/// Residual map of the midpoint box scheme on a uniform grid.
#[derive(Debug, Clone)]
pub struct BoxScheme {
    pub x: Vec<f64>,
    pub t: f64,
    pub bc: BoundaryData,
}

impl BoxScheme {
    pub fn uniform(half_width: f64, n: usize, t: f64, bc: BoundaryData) -> Self {
        let h = 2.0 * half_width / (n - 1) as f64;
        let mut x: Vec<f64> = (0..n).map(|i| -half_width + i as f64 * h).collect();
        x[n - 1] = half_width;
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        BoxScheme { x, t, bc }
    }

    pub fn nodes(&self) -> usize {
        self.x.len()
    }

    pub fn unknowns(&self) -> usize {
        COMPONENTS * self.nodes()
    }

    fn node(y: &[f64], i: usize) -> [f64; 4] {
        [y[4 * i], y[4 * i + 1], y[4 * i + 2], y[4 * i + 3]]
    }

    fn midpoint(y: &[f64], i: usize) -> [f64; 4] {
        let a = Self::node(y, i);
        let b = Self::node(y, i + 1);
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2]), 0.5 * (a[3] + b[3])]
    }

    /// Rows: two left conditions, four per interval, two right conditions.
    pub fn residual(&self, y: &[f64]) -> Vec<f64> {
        let n = self.nodes();
        let mut r = Vec::with_capacity(self.unknowns());
        r.push(self.bc.left[0].apply(&y[..4]));
        r.push(self.bc.left[1].apply(&y[..4]));
        for i in 0..n - 1 {
            let h = self.x[i + 1] - self.x[i];
            let xm = 0.5 * (self.x[i] + self.x[i + 1]);
            let m = Self::midpoint(y, i);
            for c in 0..3 {
                r.push((y[4 * (i + 1) + c] - y[4 * i + c]) / h - m[c + 1]);
            }
            r.push((y[4 * (i + 1) + 3] - y[4 * i + 3]) / h - fourth_derivative(m, xm, self.t));
        }
        r.push(self.bc.right[0].apply(&y[4 * (n - 1)..]));
        r.push(self.bc.right[1].apply(&y[4 * (n - 1)..]));
        r
    }

    pub fn jacobian(&self, y: &[f64]) -> BandedMatrix {
        let n = self.nodes();
        let mut j = BandedMatrix::zeros(self.unknowns(), KL, KU);
        for (r, row) in self.bc.left.iter().enumerate() {
            for (c, v) in row.coeffs.iter().enumerate() {
                j.set(r, c, *v);
            }
        }
        for i in 0..n - 1 {
            let h = self.x[i + 1] - self.x[i];
            let row = 2 + 4 * i;
            for c in 0..3 {
                j.set(row + c, 4 * i + c, -1.0 / h);
                j.set(row + c, 4 * (i + 1) + c, 1.0 / h);
                j.add(row + c, 4 * i + c + 1, -0.5);
                j.add(row + c, 4 * (i + 1) + c + 1, -0.5);
            }
            let g = fourth_derivative_gradient(Self::midpoint(y, i), self.t);
            for (c, gc) in g.iter().enumerate() {
                j.add(row + 3, 4 * i + c, -0.5 * gc);
                j.add(row + 3, 4 * (i + 1) + c, -0.5 * gc);
            }
            j.add(row + 3, 4 * i + 3, -1.0 / h);
            j.add(row + 3, 4 * (i + 1) + 3, 1.0 / h);
        }
        let last = self.unknowns();
        for (r, row) in self.bc.right.iter().enumerate() {
            for (c, v) in row.coeffs.iter().enumerate() {
                j.set(last - 2 + r, 4 * (n - 1) + c, *v);
            }
        }
        j
    }

    /// Residual rows folded onto nodes: interval `i` (and the left
    /// conditions) report at node `i`, the right conditions at the last node.
    pub fn node_residuals(&self, r: &[f64]) -> Vec<f64> {
        let n = self.nodes();
        let mut out = vec![0.0f64; n];
        out[0] = r[0].abs().max(r[1].abs());
        for i in 0..n - 1 {
            let m = r[2 + 4 * i..6 + 4 * i].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            out[i] = out[i].max(m);
        }
        let len = r.len();
        out[n - 1] = r[len - 2].abs().max(r[len - 1].abs());
        out
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Converged Newton state.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub y: Vec<f64>,
    pub iterations: usize,
    pub max_residual: f64,
    pub residual: Vec<f64>,
}

/// Damped Newton with step halving on the residual max-norm.
pub fn newton(scheme: &BoxScheme, mut y: Vec<f64>, tol: f64, max_iter: usize) -> Result<NewtonOutcome> {
    let mut r = scheme.residual(&y);
    let mut norm = max_abs(&r);
    let mut iterations = 0;
    while norm > tol {
        if iterations == max_iter || !norm.is_finite() {
            return Err(divergence(scheme, iterations, norm, &r));
        }
        let lu = scheme.jacobian(&y).factorize()?;
        let dy = lu.solve(&r);
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = y.iter().zip(&dy).map(|(a, d)| a - lambda * d).collect();
            let rt = scheme.residual(&trial);
            let nt = max_abs(&rt);
            if nt.is_finite() && (nt < norm || lambda < 1.0 / 1024.0) {
                y = trial;
                r = rt;
                norm = nt;
                break;
            }
            lambda *= 0.5;
            if lambda < 1.0 / 1024.0 {
                return Err(divergence(scheme, iterations + 1, norm, &r));
            }
        }
        iterations += 1;
    }
    Ok(NewtonOutcome { residual: scheme.node_residuals(&r), y, iterations, max_residual: norm })
}

fn divergence(scheme: &BoxScheme, iterations: usize, residual: f64, r: &[f64]) -> Pi2Error {
    Pi2Error::NewtonDivergence { t: scheme.t, iterations, residual, profile: scheme.node_residuals(r) }
}

/// Largest relative column deviation between the analytic Jacobian and
/// central differences of the residual map at `y`.
pub fn jacobian_deviation(scheme: &BoxScheme, y: &[f64]) -> f64 {
    let jac = scheme.jacobian(y);
    let n = scheme.unknowns();
    let mut worst = 0.0f64;
    let mut yp = y.to_vec();
    for col in 0..n {
        let eps = 1e-6 * y[col].abs().max(1.0);
        yp[col] = y[col] + eps;
        let rp = scheme.residual(&yp);
        yp[col] = y[col] - eps;
        let rm = scheme.residual(&yp);
        yp[col] = y[col];
        let lo = col.saturating_sub(KU);
        let hi = (col + KL).min(n - 1);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for row in 0..n {
            let fd = (rp[row] - rm[row]) / (2.0 * eps);
            let an = if (lo..=hi).contains(&row) { jac.get(row, col) } else { 0.0 };
            diff = diff.max((fd - an).abs());
            scale = scale.max(an.abs());
        }
        worst = worst.max(diff / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth_state(x: &[f64]) -> Vec<f64> {
        x.iter().flat_map(|&x| [x.sin(), x.cos(), -x.sin(), -x.cos()]).collect()
    }

    #[test]
    fn residual_of_exact_linear_system_is_second_order() {
        // with the nonlinear row dropped, sin satisfies the first three rows to O(h^2)
        let bc = BoundaryData::pinned([0.0; 2], [0.0; 2]);
        let mut errs = Vec::new();
        for n in [41, 81] {
            let s = BoxScheme::uniform(1.0, n, 0.0, bc);
            let r = s.residual(&smooth_state(&s.x));
            let m = (0..n - 1).map(|i| r[2 + 4 * i].abs()).fold(0.0, f64::max);
            errs.push(m);
        }
        let ratio = errs[0] / errs[1];
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn jacobian_matches_differences() {
        let bc = BoundaryData::pinned([1.0, 0.0], [-1.0, 0.0]);
        let s = BoxScheme::uniform(3.0, 21, 0.3, bc);
        let y = smooth_state(&s.x);
        assert!(jacobian_deviation(&s, &y) < 1e-7);
    }
}
