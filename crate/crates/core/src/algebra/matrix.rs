//! 2x2 matrices whose entries are truncated Laurent series.

use std::fmt;

use super::{LaurentSeries, RationalFunction, Scalar};
use crate::error::Result;

/// Entry layout is row-major: `e[0][1]` is the (1,2) entry.
#[derive(Clone, PartialEq)]
pub struct MatrixLaurentSeries<C> {
    e: [[LaurentSeries<C>; 2]; 2],
}

impl<C: Scalar> MatrixLaurentSeries<C> {
    /// Builds a matrix and truncates all four entries to their common order.
    pub fn new(e11: LaurentSeries<C>, e12: LaurentSeries<C>, e21: LaurentSeries<C>, e22: LaurentSeries<C>) -> Self {
        let m = MatrixLaurentSeries { e: [[e11, e12], [e21, e22]] };
        match m.order() {
            Some(t) => m.truncate(t),
            None => m,
        }
    }

    pub fn diagonal(a: LaurentSeries<C>, d: LaurentSeries<C>) -> Self {
        let o = [a.order(), d.order()].into_iter().flatten().min();
        let z = o.map_or_else(LaurentSeries::zero, LaurentSeries::big_o);
        Self::new(a, z.clone(), z, d)
    }

    pub fn anti_diagonal(b: LaurentSeries<C>, c: LaurentSeries<C>) -> Self {
        let o = [b.order(), c.order()].into_iter().flatten().min();
        let z = o.map_or_else(LaurentSeries::zero, LaurentSeries::big_o);
        Self::new(z.clone(), b, c, z)
    }

    pub fn zero() -> Self {
        let z = LaurentSeries::zero();
        MatrixLaurentSeries { e: [[z.clone(), z.clone()], [z.clone(), z]] }
    }

    pub fn identity() -> Self {
        Self::diagonal(LaurentSeries::one(), LaurentSeries::one())
    }

    /// Entry `(i, j)` with 1-based indices as in matrix notation.
    pub fn entry(&self, i: usize, j: usize) -> &LaurentSeries<C> {
        &self.e[i - 1][j - 1]
    }

    /// Common truncation order (`None` if every entry is exact).
    pub fn order(&self) -> Option<i32> {
        self.e.iter().flatten().filter_map(|s| s.order()).min()
    }

    /// Lowest exponent across all entries.
    pub fn valuation(&self) -> Option<i32> {
        self.e.iter().flatten().filter_map(|s| s.valuation()).min()
    }

    pub fn truncate(&self, order: i32) -> Self {
        self.map_entries(|s| s.truncate(order))
    }

    fn map_entries(&self, f: impl Fn(&LaurentSeries<C>) -> LaurentSeries<C>) -> Self {
        MatrixLaurentSeries {
            e: [[f(&self.e[0][0]), f(&self.e[0][1])], [f(&self.e[1][0]), f(&self.e[1][1])]],
        }
    }

    fn zip_entries(&self, rhs: &Self, f: impl Fn(&LaurentSeries<C>, &LaurentSeries<C>) -> LaurentSeries<C>) -> Self {
        let g = |i: usize, j: usize| f(&self.e[i][j], &rhs.e[i][j]);
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_entries(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_entries(rhs, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|s| s.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_entries(|s| s.scale(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.e;
        let b = &rhs.e;
        let g = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn principal_part(&self) -> Self {
        self.map_entries(|s| s.principal_part())
    }

    pub fn analytic_part(&self) -> Self {
        self.map_entries(|s| s.analytic_part())
    }

    /// Coefficient matrix of `w^m`, row-major.
    pub fn coeff(&self, m: i32) -> Result<[[C; 2]; 2]> {
        Ok([
            [self.e[0][0].coeff(m)?, self.e[0][1].coeff(m)?],
            [self.e[1][0].coeff(m)?, self.e[1][1].coeff(m)?],
        ])
    }

    /// Applies `f` to every coefficient of every entry.
    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MatrixLaurentSeries<D> {
        let g = |i: usize, j: usize| self.e[i][j].map(&f);
        MatrixLaurentSeries { e: [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]] }
    }

    /// Off-diagonal entries vanish identically through the known order.
    pub fn is_diagonal(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero()
    }

    /// Diagonal entries vanish identically through the known order.
    pub fn is_anti_diagonal(&self) -> bool {
        self.e[0][0].is_zero() && self.e[1][1].is_zero()
    }
}

impl MatrixLaurentSeries<RationalFunction> {
    /// Numeric value of every entry at `z = z0`, `w = w0`.
    pub fn eval_numeric(&self, z0: f64, w0: f64) -> Result<[[f64; 2]; 2]> {
        Ok([
            [self.e[0][0].eval_numeric(z0, w0)?, self.e[0][1].eval_numeric(z0, w0)?],
            [self.e[1][0].eval_numeric(z0, w0)?, self.e[1][1].eval_numeric(z0, w0)?],
        ])
    }
}

impl<C: Scalar> fmt::Debug for MatrixLaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.e.iter().flatten()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Rational};

    fn s(low: i32, c: &[i64]) -> LaurentSeries<Rational> {
        LaurentSeries::exact(low, c.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn parity_of_products() {
        let a = MatrixLaurentSeries::anti_diagonal(s(-1, &[1, 2]), s(0, &[3]));
        let b = MatrixLaurentSeries::anti_diagonal(s(-2, &[1]), s(1, &[5]));
        let ab = a.mul(&b);
        assert!(ab.is_diagonal());
        assert!(a.is_anti_diagonal() && !a.is_diagonal());
        assert_eq!(ab.entry(1, 1), &s(0, &[5, 10]));
        assert!(ab.mul(&a).is_anti_diagonal());
    }

    #[test]
    fn shared_truncation_order() {
        let a = MatrixLaurentSeries::diagonal(
            LaurentSeries::new(0, vec![q(1, 1), q(1, 1), q(1, 1)], Some(2)),
            s(0, &[1, 1, 1, 1]),
        );
        assert_eq!(a.order(), Some(2));
        assert!(a.entry(2, 2).coeff(3).is_err());
        assert_eq!(a.mul(&MatrixLaurentSeries::identity()), a);
    }
}
