//! Reduced rational functions of one variable `z` over `Q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{rational_to_f64, Poly};
use super::Rational;
use crate::error::{Pi2Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`. Two values are equal
/// iff they represent the same element of `Q(z)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

/// Which arithmetic operation [`rf_arith`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic dispatch; the only fallible case is division by zero.
pub fn rf_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Pi2Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n.into(), d.into()))
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, when this function does not depend on `z`.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Pi2Error::DivisionByZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(n, &self.den * &self.den)
    }

    /// `f(−z)`.
    pub fn reflect(&self) -> Self {
        Self::with_monic_den(self.num.reflect(), self.den.reflect())
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, z: &Rational) -> Result<Rational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Pi2Error::Pole {
                z: z.to_string(),
                factor: self.den.to_string(),
                value: 0.0,
            });
        }
        Ok(self.num.eval(z) / d)
    }

    /// Value at a binary64 point. The point is converted exactly to a
    /// rational, the function is evaluated exactly and the result rounded
    /// once, so the only error is the conditioning of `f` around `z`.
    pub fn eval_f64(&self, z: f64) -> Result<f64> {
        let zq = Rational::from_float(z).ok_or_else(|| Pi2Error::Pole {
            z: z.to_string(),
            factor: "non-finite argument".into(),
            value: f64::NAN,
        })?;
        let d = self.den.eval(&zq);
        if d.is_zero() {
            return Err(Pi2Error::Pole {
                z: format!("{z:e}"),
                factor: self.den.to_string(),
                value: 0.0,
            });
        }
        Ok(rational_to_f64(&(self.num.eval(&zq) / d)))
    }

    /// Plain Horner evaluation in `f64` (faster, no accuracy guarantee).
    pub fn eval_f64_horner(&self, z: f64) -> Result<f64> {
        let d = self.den.eval_f64(z);
        if d == 0.0 {
            return Err(Pi2Error::Pole { z: format!("{z:e}"), factor: self.den.to_string(), value: d });
        }
        Ok(self.num.eval_f64(z) / d)
    }

    /// Image in `Q[z]/(modulus)`: for an irreducible `modulus` this is the
    /// exact value at an algebraic root, as a polynomial of degree below
    /// `deg(modulus)`.
    pub fn reduce_mod(&self, modulus: &Poly) -> Result<Poly> {
        let inv = self
            .den
            .inverse_mod(modulus)
            .ok_or_else(|| Pi2Error::NotInvertible(self.den.to_string(), modulus.to_string()))?;
        Ok((&self.num.rem(modulus) * &inv).rem(modulus))
    }

    /// Integer-coefficient numerator and denominator lists (low degree first),
    /// jointly scaled to be coprime with a positive leading denominator term.
    pub fn to_integer_lists(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (n, sn) = self.num.primitive_integer();
        let (d, sd) = self.den.primitive_integer();
        if n.is_empty() {
            return (Vec::new(), vec![BigInt::one()]);
        }
        // num/den = (sn/sd) * n/d
        let ratio = sn / sd;
        let (p, q) = (ratio.numer().clone(), ratio.denom().clone());
        let mut num: Vec<BigInt> = n.into_iter().map(|c| c * &p).collect();
        let mut den: Vec<BigInt> = d.into_iter().map(|c| c * &q).collect();
        let g = num
            .iter()
            .chain(den.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_one() && !g.is_zero() {
            num.iter_mut().for_each(|c| *c /= &g);
            den.iter_mut().for_each(|c| *c /= &g);
        }
        if den.last().is_some_and(|c| c.is_negative()) {
            num.iter_mut().for_each(|c| *c = -&*c);
            den.iter_mut().for_each(|c| *c = -&*c);
        }
        (num, den)
    }

    pub fn from_integer_lists(num: &[BigInt], den: &[BigInt]) -> Result<Self> {
        let to_poly =
            |v: &[BigInt]| Poly::from_coeffs(v.iter().cloned().map(Rational::from_integer).collect());
        Self::new(to_poly(num), to_poly(den))
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_constant() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            // coprime denominators: the sum needs no further reduction
            return RationalFunction::with_monic_den(num, &self.den * &rhs.den);
        }
        let b = self.den.exact_div(&g);
        let d = rhs.den.exact_div(&g);
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        RationalFunction::normalized(num, &(&b * &d) * &g)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = if g1.is_constant() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1), rhs.den.exact_div(&g1))
        };
        let (c, b) = if g2.is_constant() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        RationalFunction::with_monic_den(&a * &c, &b * &d)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> Self {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_i64s(num), Poly::from_i64s(den)).unwrap()
    }

    #[test]
    fn product_of_linear_terms() {
        let a = RationalFunction::z().scale(&Rational::new(1.into(), 30.into()));
        let sq = &a * &a;
        assert_eq!(sq, RationalFunction::from_poly(Poly::from_coeffs(vec![
            Rational::zero(),
            Rational::zero(),
            Rational::new(1.into(), 900.into()),
        ])));
    }

    #[test]
    fn self_quotient_is_one() {
        let a = rf(&[-24, 0, 0, 1], &[1]);
        assert_eq!(rf_arith(&a, &a, ArithOp::Div).unwrap(), RationalFunction::one());
    }

    #[test]
    fn inverse_of_c3_over_24() {
        // ((z^3 - 24)/(36 z))^{-1} / 24 = 3z / (2(z^3 - 24))
        let c3 = rf(&[-24, 0, 0, 1], &[0, 36]);
        let got = c3.recip().unwrap().scale(&Rational::new(1.into(), 24.into()));
        assert_eq!(got, rf(&[0, 3], &[-48, 0, 0, 2]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = rf(&[1, 1], &[1]);
        assert!(matches!(
            rf_arith(&a, &RationalFunction::zero(), ArithOp::Div),
            Err(Pi2Error::DivisionByZero)
        ));
        assert!(RationalFunction::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn pole_is_reported() {
        let f = rf(&[1], &[-2, 1]);
        let err = f.eval_exact(&Rational::from_integer(2.into())).unwrap_err();
        assert!(matches!(err, Pi2Error::Pole { .. }));
        assert!(f.eval_f64(2.0).is_err());
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(RationalFunction::one().eval_f64(17.25).unwrap(), 1.0);
        let f = RationalFunction::z().scale(&Rational::new(1.into(), 30.into()));
        assert_eq!(
            f.eval_exact(&Rational::from_integer((-2).into())).unwrap(),
            Rational::new((-1).into(), 15.into())
        );
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz 1/(z^3 - 24) = -3 z^2/(z^3 - 24)^2
        let f = rf(&[1], &[-24, 0, 0, 1]);
        let expected = rf(&[0, 0, -3], &[576, 0, 0, -48, 0, 0, 1]);
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn integer_lists_round_trip() {
        let f = rf(&[3, 0, -5], &[7, 2]).scale(&Rational::new(4.into(), 9.into()));
        let (n, d) = f.to_integer_lists();
        assert_eq!(RationalFunction::from_integer_lists(&n, &d).unwrap(), f);
    }

    #[test]
    fn reduce_modulo_minimal_polynomial() {
        // at z^3 = -48:  z^3/(z^3 - 24) = (-48)/(-72) = 2/3
        let f = rf(&[0, 0, 0, 1], &[-24, 0, 0, 1]);
        let m = Poly::from_i64s(&[48, 0, 0, 1]);
        let v = f.reduce_mod(&m).unwrap();
        assert_eq!(v, Poly::constant(Rational::new(2.into(), 3.into())));
    }
}
