use crate::algebra::{q, LaurentSeries, Localized, MatrixLaurentSeries, RationalFunction};
use crate::branch::Branch;
use crate::error::{Pi2Error, Result};

use super::{airy_constants, g_coeffs, GCoefficients};

type Series = LaurentSeries<RationalFunction>;
type Matrix = MatrixLaurentSeries<RationalFunction>;
pub(crate) type LSeries = LaurentSeries<Localized>;
pub(crate) type LMatrix = MatrixLaurentSeries<Localized>;

/// Pole order of `Q_k` and `R_k`: `n_{2j} = 3j`, `n_{2j-1} = 3j - 1`.
pub fn pole_order(k: usize) -> i32 {
    assert!(k >= 1);
    let j = k.div_ceil(2) as i32;
    if k % 2 == 0 {
        3 * j
    } else {
        3 * j - 1
    }
}

/// Caches powers `(c3 + c2 w + c1 w^2)^(-p)` known through a fixed order.
pub struct QSeriesBuilder {
    gc: GCoefficients,
    sign: i8,
    order: i32,
    inverse_powers: Vec<LSeries>,
}

impl QSeriesBuilder {
    /// Prepares powers `p = 1..=max_power`, each known through `w^order`.
    pub fn new(gc: GCoefficients, max_power: usize, order: i32) -> Result<Self> {
        let sign = gc.branch.sign_i64() as i8;
        let p = gc.polynomial_factor();
        let p = LSeries::exact(
            0,
            (0..=2).map(|m| Localized::from_rational_function(sign, &p.coeff(m)?)).collect::<Result<_>>()?,
        );
        let pinv = p.reciprocal(order)?;
        let mut inverse_powers = Vec::with_capacity(max_power);
        let mut acc = pinv.clone();
        for p in 1..=max_power {
            if p > 1 {
                acc = acc.mul(&pinv);
            }
            inverse_powers.push(acc.clone());
        }
        Ok(QSeriesBuilder { gc, sign, order, inverse_powers })
    }

    pub fn g_coefficients(&self) -> &GCoefficients {
        &self.gc
    }

    /// Integer-indexed series of `(3g/2)^(-k)`; for odd `k` the common factor
    /// `w^(-1/2)` is removed. The lowest exponent is `-3k/2` for even `k` and
    /// `(5 - 3k)/2` for odd `k`.
    pub fn g_series(&self, k: usize) -> Result<Series> {
        Ok(self.g_series_local(k)?.map(Localized::to_rational_function))
    }

    pub(crate) fn g_series_local(&self, k: usize) -> Result<LSeries> {
        let p = self.inverse_powers.get(k - 1).ok_or(Pi2Error::DepthExceeded {
            requested: k,
            available: self.inverse_powers.len(),
        })?;
        let j = k.div_ceil(2) as i32;
        let shift = if k % 2 == 0 { -3 * j } else { -3 * j + 2 };
        let scale = pow_ratio(2, 3, k as u32);
        Ok(p.shift(shift).scale(&Localized::constant(self.sign, scale)))
    }

    /// `Q_k` known through `w^t`.
    pub fn q(&self, k: usize, t: i32) -> Result<Matrix> {
        Ok(self.q_local(k, t)?.map(Localized::to_rational_function))
    }

    pub(crate) fn q_local(&self, k: usize, t: i32) -> Result<LMatrix> {
        let n = pole_order(k);
        if t < -n {
            return Err(Pi2Error::Config(format!("truncation order {t} lies below the pole order -{n} of Q_{k}")));
        }
        if t + n > self.order {
            return Err(Pi2Error::TruncationShortfall { needed: t + n, available: self.order });
        }
        let g = self.g_series_local(k)?;
        let a = airy_constants(k);
        let that = Localized::constant(self.sign, a.t_hat);
        let tk = Localized::constant(self.sign, a.t);
        if k % 2 == 0 {
            Ok(LMatrix::diagonal(g.scale(&that).truncate(t), g.scale(&tk).truncate(t)))
        } else {
            // (1,2) carries g_{k, m+1}, (2,1) carries g_{k, m}
            Ok(LMatrix::anti_diagonal(g.shift(-1).scale(&that).truncate(t), g.scale(&tk).truncate(t)))
        }
    }
}

fn pow_ratio(n: i64, d: i64, e: u32) -> crate::algebra::Rational {
    let mut acc = q(1, 1);
    for _ in 0..e {
        acc *= q(n, d);
    }
    acc
}

/// `(3g/2)^(-k)` for the given branch, known through `w^t`.
pub fn g_series(k: usize, t: i32, branch: Branch) -> Result<Series> {
    let order = t + pole_order(k) + 1;
    QSeriesBuilder::new(g_coeffs(branch), k, order)?.g_series(k).map(|s| s.truncate(t))
}

/// `Q_k` for the given branch, known through `w^t`.
pub fn q_series(k: usize, t: i32, branch: Branch) -> Result<Matrix> {
    let order = t + pole_order(k);
    QSeriesBuilder::new(g_coeffs(branch), k, order.max(0))?.q(k, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_orders() {
        assert_eq!((1..=6).map(pole_order).collect::<Vec<_>>(), vec![2, 3, 5, 6, 8, 9]);
    }

    #[test]
    fn q1_structure() {
        let q1 = q_series(1, 2, Branch::Plus).unwrap();
        assert!(q1.is_anti_diagonal());
        assert_eq!(q1.valuation(), Some(-2));
        assert_eq!(q1.principal_part().entry(1, 2).terms().count(), 2);
        let gc = g_coeffs(Branch::Plus);
        let c3sq = &gc.c3 * &gc.c3;
        let expected = (&gc.c2.scale(&q(-2 * 5, 3 * 48)))
            .checked_div(&c3sq)
            .unwrap();
        assert_eq!(q1.entry(1, 2).coeff(-1).unwrap(), expected);
    }

    #[test]
    fn even_q_is_diagonal() {
        let q2 = q_series(2, 0, Branch::Minus).unwrap();
        assert!(q2.is_diagonal());
        assert_eq!(q2.valuation(), Some(-3));
        assert!(q_series(3, 0, Branch::Plus).unwrap().is_anti_diagonal());
    }

    #[test]
    fn odd_g_series_has_no_leading_terms() {
        // g_{3,-6} and g_{3,-5} vanish: the series starts at -4
        let g3 = g_series(3, 0, Branch::Plus).unwrap();
        assert_eq!(g3.valuation(), Some(-4));
        assert_eq!(g3.coeff(-6).unwrap(), RationalFunction::zero());
    }

    #[test]
    fn shortfall_is_reported() {
        let b = QSeriesBuilder::new(g_coeffs(Branch::Plus), 2, 3).unwrap();
        assert!(matches!(b.q(2, 1), Err(Pi2Error::TruncationShortfall { .. })));
        assert!(b.q(2, 0).is_ok());
    }
}
