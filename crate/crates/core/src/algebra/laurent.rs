//! Truncated Laurent series `sum_{m >= low} a_m w^m` with exact coefficients.
//!
//! A series either is exact (finitely many nonzero terms, no truncation) or is
//! known through some order `T`: every coefficient with exponent `<= T` is
//! correct and nothing is claimed beyond.

use std::fmt;

use super::{RationalFunction, Scalar};
use crate::error::{Pi2Error, Result};

#[derive(Clone, PartialEq)]
pub struct LaurentSeries<C> {
    low: i32,
    coeffs: Vec<C>,
    order: Option<i32>,
}

fn min_order(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<C: Scalar> LaurentSeries<C> {
    /// Builds a series from coefficients of `w^low, w^(low+1), ...`.
    /// `order = None` marks the series as exact.
    pub fn new(low: i32, coeffs: Vec<C>, order: Option<i32>) -> Self {
        let mut s = LaurentSeries { low, coeffs, order };
        s.normalize();
        s
    }

    pub fn exact(low: i32, coeffs: Vec<C>) -> Self {
        Self::new(low, coeffs, None)
    }

    pub fn zero() -> Self {
        LaurentSeries { low: 0, coeffs: Vec::new(), order: None }
    }

    /// The zero series known only through `order`, i.e. `O(w^(order+1))`.
    pub fn big_o(order: i32) -> Self {
        LaurentSeries { low: 0, coeffs: Vec::new(), order: Some(order) }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn monomial(c: C, exponent: i32) -> Self {
        Self::exact(exponent, vec![c])
    }

    fn normalize(&mut self) {
        if let Some(t) = self.order {
            let keep = (t - self.low + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero with no truncation: the zero element, not an unknown remainder.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.order.is_none()
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero stored coefficient.
    pub fn highest(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Highest exponent whose coefficient is known (`None` for exact series).
    pub fn order(&self) -> Option<i32> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Coefficient of `w^m`. Errors if `m` lies beyond the truncation order.
    pub fn coeff(&self, m: i32) -> Result<C> {
        if let Some(t) = self.order {
            if m > t {
                return Err(Pi2Error::TruncationShortfall { needed: m, available: t });
            }
        }
        Ok(self.coeff_unchecked(m))
    }

    fn coeff_unchecked(&self, m: i32) -> C {
        let i = m - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            C::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i32, c))
    }

    /// Drops every coefficient above `order` and records the truncation.
    pub fn truncate(&self, order: i32) -> Self {
        Self::new(self.low, self.coeffs.clone(), min_order(self.order, Some(order)))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.plus(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.minus(b))
    }

    fn combine(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = min_order(self.order, rhs.order);
        let lows = [self.valuation(), rhs.valuation()];
        let low = match lows.iter().flatten().min() {
            Some(&l) => l,
            None => return LaurentSeries { low: 0, coeffs: Vec::new(), order },
        };
        let high = [self.highest(), rhs.highest()].into_iter().flatten().max().unwrap();
        let high = order.map_or(high, |t| high.min(t));
        let coeffs = (low..=high)
            .map(|m| f(&self.coeff_unchecked(m), &rhs.coeff_unchecked(m)))
            .collect();
        Self::new(low, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            low: self.low,
            coeffs: self.coeffs.iter().map(C::negated).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|a| a.times(c)).collect(), self.order)
    }

    /// Multiplication by `w^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return LaurentSeries { low: 0, coeffs: Vec::new(), order: self.order.map(|t| t + k) };
        }
        LaurentSeries {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            order: self.order.map(|t| t + k),
        }
    }

    /// Cauchy product. The result is known through
    /// `min(T_a + v_b, T_b + v_a)` where `v` is the valuation.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = match (self.valuation(), rhs.valuation()) {
            (Some(va), Some(vb)) => min_order(self.order.map(|t| t + vb), rhs.order.map(|t| t + va)),
            (None, Some(vb)) => self.order.map(|t| t + vb),
            (Some(va), None) => rhs.order.map(|t| t + va),
            (None, None) => match (self.order, rhs.order) {
                (None, _) | (_, None) => None,
                (Some(a), Some(b)) => Some(a + b + 1),
            },
        };
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries { low: 0, coeffs: Vec::new(), order };
        }
        let low = self.low + rhs.low;
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(t) = order {
            len = len.min((t - low + 1).max(0) as usize);
        }
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(low, out, order)
    }

    /// Multiplicative inverse, computed through exponent `max_order` at most
    /// and never beyond what the operand's truncation supports.
    pub fn reciprocal(&self, max_order: i32) -> Result<Self> {
        let v = self.valuation().ok_or(Pi2Error::ZeroLeadingCoefficient)?;
        let inv0 = self.coeffs[0].inverse()?;
        let supported = self.order.map(|t| (t - v) - v);
        let exact_inverse = self.coeffs.len() == 1 && self.order.is_none();
        if exact_inverse {
            return Ok(Self::monomial(inv0, -v));
        }
        let order = min_order(supported, Some(max_order)).unwrap();
        let n = (order + v + 1).max(0) as usize;
        let mut b: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(inv0.clone());
                continue;
            }
            let mut acc = C::zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.plus(&self.coeffs[i].times(&b[k - i]));
            }
            b.push(acc.times(&inv0).negated());
        }
        Ok(Self::new(-v, b, Some(order)))
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Terms with negative exponent.
    pub fn principal_part(&self) -> Self {
        let order = self.order.filter(|&t| t < -1);
        self.window(i32::MIN, -1, order)
    }

    /// Terms with non-negative exponent.
    pub fn analytic_part(&self) -> Self {
        self.window(0, i32::MAX, self.order)
    }

    fn window(&self, lo: i32, hi: i32, order: Option<i32>) -> Self {
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.low + i as i32, c))
            .map(|(m, c)| if m >= lo && m <= hi { c.clone() } else { C::zero() })
            .collect();
        Self::new(self.low, coeffs, order)
    }

    /// Applies `f` to every coefficient.
    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries::new(self.low, self.coeffs.iter().map(f).collect(), self.order)
    }

    /// Exact equality of all coefficients through `order`.
    pub fn agrees_through(&self, rhs: &Self, order: i32) -> bool {
        let lo = [self.valuation(), rhs.valuation()].into_iter().flatten().min().unwrap_or(0);
        (lo..=order).all(|m| self.coeff_unchecked(m) == rhs.coeff_unchecked(m))
    }
}

impl LaurentSeries<RationalFunction> {
    /// Sums the stored terms at `z = z0`, `w = w0` in binary64.
    pub fn eval_numeric(&self, z0: f64, w0: f64) -> Result<f64> {
        if w0 == 0.0 && self.valuation().is_some_and(|v| v < 0) {
            return Err(Pi2Error::Pole {
                z: format!("w = {w0}"),
                factor: "w".into(),
                value: 0.0,
            });
        }
        let mut sum = 0.0;
        for (m, c) in self.terms() {
            sum += c.eval_f64(z0)? * w0.powi(m);
        }
        Ok(sum)
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*w^{m}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.order {
            write!(f, " + O(w^{})", t + 1)?;
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentSeries")
            .field("low", &self.low)
            .field("coeffs", &self.coeffs)
            .field("order", &self.order)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Poly, Rational};

    fn s(low: i32, c: &[i64], order: Option<i32>) -> LaurentSeries<Rational> {
        LaurentSeries::new(low, c.iter().map(|&x| q(x, 1)).collect(), order)
    }

    #[test]
    fn product_with_pole() {
        let a = s(-1, &[1, 1], None);
        let b = s(0, &[1, -1], None);
        assert_eq!(a.mul(&b), s(-1, &[1, 0, -1], None));
        assert_eq!(a.mul(&LaurentSeries::one()), a);
    }

    #[test]
    fn reciprocal_of_monomial() {
        let w2 = s(2, &[1], None);
        assert_eq!(w2.reciprocal(10).unwrap(), s(-2, &[1], None));
    }

    #[test]
    fn reciprocal_of_zero_fails() {
        assert!(matches!(
            LaurentSeries::<Rational>::zero().reciprocal(4),
            Err(Pi2Error::ZeroLeadingCoefficient)
        ));
    }

    #[test]
    fn reciprocal_first_order_term() {
        // 1/(c3 + c2 w + c1 w^2) = 1/c3 - c2/c3^2 w + ...
        let c1 = RationalFunction::from_ratio(1, 105);
        let c2 = RationalFunction::z().scale(&q(1, 30));
        let c3 = RationalFunction::new(Poly::from_i64s(&[-24, 0, 0, 1]), Poly::from_i64s(&[0, 36])).unwrap();
        let p = LaurentSeries::exact(0, vec![c3.clone(), c2.clone(), c1]);
        let r = p.reciprocal(3).unwrap();
        assert_eq!(r.coeff(0).unwrap(), c3.recip().unwrap());
        let expected = -&(&c2 * &(&c3 * &c3).recip().unwrap());
        assert_eq!(r.coeff(1).unwrap(), expected);
        let prod = p.mul(&r);
        assert!(prod.agrees_through(&LaurentSeries::one(), 3));
        assert_eq!(prod.order(), Some(3));
    }

    #[test]
    fn principal_and_analytic_parts() {
        let a = s(-2, &[1, 0, 3, 1], None);
        assert_eq!(a.principal_part(), s(-2, &[1], None));
        assert_eq!(a.analytic_part(), s(0, &[3, 1], None));
        assert!(s(0, &[1, 2], Some(5)).principal_part().is_zero());
    }

    #[test]
    fn truncation_orders_propagate() {
        let a = s(-2, &[1, 1, 1, 1, 1], Some(2));
        let b = s(0, &[1, 1], Some(6));
        // a*b known through min(2 + 0, 6 - 2) = 2
        assert_eq!(a.mul(&b).order(), Some(2));
        assert_eq!(a.add(&b).order(), Some(2));
        assert!(a.coeff(3).is_err());
    }

    #[test]
    fn numeric_evaluation() {
        let a = LaurentSeries::exact(-1, vec![RationalFunction::z(), RationalFunction::one()]);
        let v = a.eval_numeric(2.0, 0.5).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        assert!(a.eval_numeric(2.0, 0.0).is_err());
    }
}
