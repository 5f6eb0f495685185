//! Elements of `Q[z, 1/z, 1/d]` with `d = z^3 - 24 s`, `s = +-1`.
//!
//! Every quantity produced by the expansion recursion lives in this ring, and
//! unlike general rational functions it needs no polynomial gcd: an element
//! is `N(z) z^a / d^b` (`a`, `b` of either sign) with `N` coprime to both `z`
//! and `d`.

use num_traits::Zero;

use super::{Poly, Rational, RationalFunction, Scalar};
use crate::error::{Pi2Error, Result};

#[derive(Clone, Debug)]
pub struct Localized {
    sign: i8,
    num: Poly,
    z_exp: i32,
    /// Power of `d` in the denominator (negative: in the numerator).
    d_exp: i32,
}

impl PartialEq for Localized {
    fn eq(&self, rhs: &Self) -> bool {
        self.num == rhs.num
            && self.z_exp == rhs.z_exp
            && self.d_exp == rhs.d_exp
            && (self.d_exp == 0 || self.sign == rhs.sign)
    }
}

fn d_poly(sign: i8) -> Poly {
    Poly::from_i64s(&[-24 * sign as i64, 0, 0, 1])
}

impl Localized {
    pub fn from_poly(sign: i8, p: Poly) -> Self {
        Self::normalized(sign, p, 0, 0)
    }

    pub fn constant(sign: i8, c: Rational) -> Self {
        Self::from_poly(sign, Poly::constant(c))
    }

    pub fn zero_with(sign: i8) -> Self {
        Localized { sign, num: Poly::zero(), z_exp: 0, d_exp: 0 }
    }

    /// `c z^a / d^b`.
    pub fn unit(sign: i8, c: Rational, z_exp: i32, d_exp: i32) -> Self {
        Self::normalized(sign, Poly::constant(c), z_exp, d_exp)
    }

    fn normalized(sign: i8, mut num: Poly, mut z_exp: i32, mut d_exp: i32) -> Self {
        if num.is_zero() {
            return Self::zero_with(sign);
        }
        let low = num.coeffs().iter().take_while(|c| Zero::is_zero(*c)).count();
        if low > 0 {
            num = Poly::from_coeffs(num.coeffs()[low..].to_vec());
            z_exp += low as i32;
        }
        let d = d_poly(sign);
        while num.degree().unwrap_or(0) >= 3 {
            let (quo, rem) = num.div_rem(&d);
            if !rem.is_zero() {
                break;
            }
            num = quo;
            d_exp -= 1;
        }
        Localized { sign, num, z_exp, d_exp }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Converts a rational function whose denominator is `c z^a d^b`.
    pub fn from_rational_function(sign: i8, f: &RationalFunction) -> Result<Self> {
        let mut den = f.denominator().clone();
        let low = den.coeffs().iter().take_while(|c| Zero::is_zero(*c)).count();
        den = Poly::from_coeffs(den.coeffs()[low..].to_vec());
        let d = d_poly(sign);
        let mut b = 0i32;
        while den.degree().unwrap_or(0) >= 3 {
            let (quo, rem) = den.div_rem(&d);
            if !rem.is_zero() {
                break;
            }
            den = quo;
            b += 1;
        }
        if !den.is_constant() {
            return Err(Pi2Error::NotInvertible(f.denominator().to_string(), format!("z*({d})")));
        }
        let c = den.coeff(0).recip();
        Ok(Self::normalized(sign, f.numerator().scale(&c), -(low as i32), b))
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        if self.num.is_zero() {
            return RationalFunction::zero();
        }
        let zp = Poly::monomial(Rational::from_integer(1.into()), self.z_exp.unsigned_abs() as usize);
        let (num, den) = if self.z_exp >= 0 { (&self.num * &zp, Poly::one()) } else { (self.num.clone(), zp) };
        let dp = d_poly(self.sign).pow(self.d_exp.unsigned_abs());
        let (num, den) = if self.d_exp >= 0 { (num, &den * &dp) } else { (&num * &dp, den) };
        RationalFunction::new(num, den).expect("nonzero denominator")
    }

    /// Sign of `d` for a binary operation; elements free of `d` fit either ring.
    fn ring_sign(&self, rhs: &Self) -> i8 {
        match (self.d_exp != 0, rhs.d_exp != 0) {
            (true, true) => {
                debug_assert_eq!(self.sign, rhs.sign, "mixing elements of different rings");
                self.sign
            }
            (true, false) => self.sign,
            (false, true) => rhs.sign,
            (false, false) => self.sign,
        }
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let sign = self.ring_sign(rhs);
        let rnum = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.num.is_zero() {
            return Localized { sign, num: rnum, z_exp: rhs.z_exp, d_exp: rhs.d_exp };
        }
        if rhs.num.is_zero() {
            return Localized { sign, ..self.clone() };
        }
        let z_exp = self.z_exp.min(rhs.z_exp);
        let d_exp = self.d_exp.max(rhs.d_exp);
        let lift = |n: &Poly, a: i32, b: i32| -> Poly {
            let mut p = n.clone();
            if a > z_exp {
                p = &p * &Poly::monomial(Rational::from_integer(1.into()), (a - z_exp) as usize);
            }
            if b < d_exp {
                p = &p * &d_poly(sign).pow((d_exp - b) as u32);
            }
            p
        };
        let n = &lift(&self.num, self.z_exp, self.d_exp) + &lift(&rnum, rhs.z_exp, rhs.d_exp);
        Self::normalized(sign, n, z_exp, d_exp)
    }

    /// Value at a binary64 point, via the exact rational form.
    pub fn eval_f64(&self, z: f64) -> Result<f64> {
        self.to_rational_function().eval_f64(z)
    }
}

impl Scalar for Localized {
    fn zero() -> Self {
        Localized::zero_with(1)
    }
    fn one() -> Self {
        Localized::constant(1, Rational::from_integer(1.into()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, false)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, true)
    }
    fn times(&self, rhs: &Self) -> Self {
        let sign = self.ring_sign(rhs);
        if self.num.is_zero() || rhs.num.is_zero() {
            return Localized::zero_with(sign);
        }
        // z and d are prime in Q[z], so coprimality with both is preserved
        Localized {
            sign,
            num: &self.num * &rhs.num,
            z_exp: self.z_exp + rhs.z_exp,
            d_exp: self.d_exp + rhs.d_exp,
        }
    }
    fn negated(&self) -> Self {
        Localized { num: -&self.num, ..self.clone() }
    }
    fn inverse(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Pi2Error::DivisionByZero);
        }
        if !self.num.is_constant() {
            return Err(Pi2Error::NotInvertible(self.num.to_string(), "z*(z^3 -+ 24)".into()));
        }
        Ok(Localized {
            sign: self.sign,
            num: Poly::constant(self.num.coeff(0).recip()),
            z_exp: -self.z_exp,
            d_exp: -self.d_exp,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn round_trip_through_rational_functions() {
        let f = RationalFunction::new(Poly::from_i64s(&[0, 0, 3, 1]), Poly::from_i64s(&[0, -24, 0, 0, 1]))
            .unwrap();
        let l = Localized::from_rational_function(1, &f).unwrap();
        assert_eq!(l.to_rational_function(), f);
    }

    #[test]
    fn sums_cancel_denominators() {
        // z^3/d - 24/d = 1
        let a = Localized::normalized(1, Poly::from_i64s(&[0, 0, 0, 1]), 0, 1);
        let b = Localized::unit(1, q(24, 1), 0, 1);
        assert_eq!(a.minus(&b), Localized::one());
    }

    #[test]
    fn inverse_of_d_over_z() {
        // c3 = d/(36 z); 1/c3 = 36 z / d
        let d = Localized::from_poly(-1, Poly::from_i64s(&[24, 0, 0, 1]));
        let c3 = d.times(&Localized::unit(-1, q(1, 36), -1, 0));
        assert_eq!((c3.num.clone(), c3.d_exp), (Poly::constant(q(1, 36)), -1));
        let inv = c3.inverse().unwrap();
        assert_eq!(inv.times(&c3), Localized::constant(-1, q(1, 1)));
    }

    #[test]
    fn non_units_are_rejected() {
        let a = Localized::from_poly(1, Poly::from_i64s(&[1, 1]));
        assert!(a.inverse().is_err());
    }
}
