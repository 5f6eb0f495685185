//! Real roots `z_plus`, `z_minus` of the branch cubics
//! `z^3 - 24 mu z +- 48 = 0`, admissibility of `mu`, and the small-`mu`
//! Taylor series of `z_plus`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{q, rational_to_f64, Poly, Rational, RationalFunction};
use crate::error::{Pi2Error, Result};

/// Default upper bound for `mu`, strictly below `2^(-2/3) 3^(-1/3)`.
pub const DEFAULT_MU_BOUND: f64 = 0.43;

/// `2^(-2/3) 3^(-1/3)`.
pub fn critical_mu() -> f64 {
    2f64.powf(-2.0 / 3.0) * 3f64.powf(-1.0 / 3.0)
}

/// Which end of the real line an expansion describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `x -> +inf`, cubic `z^3 - 24 mu z + 48 = 0`.
    Plus,
    /// `x -> -inf`, cubic `z^3 - 24 mu z - 48 = 0`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn sign_i64(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    /// Branch governing the asymptotics at `x`; `None` for `x = 0`.
    pub fn of_x(x: f64) -> Option<Branch> {
        if x > 0.0 {
            Some(Branch::Plus)
        } else if x < 0.0 {
            Some(Branch::Minus)
        } else {
            None
        }
    }

    /// `mu` as a rational function of the root: `(z^3 +- 48) / (24 z)`.
    pub fn mu_of_z(self) -> RationalFunction {
        let c = 48 * self.sign_i64();
        RationalFunction::new(Poly::from_i64s(&[c, 0, 0, 1]), Poly::from_i64s(&[0, 24]))
            .expect("nonzero denominator")
    }

    /// The cubic's value at `z`.
    pub fn cubic(self, z: f64, mu: f64) -> f64 {
        z * z * z - 24.0 * mu * z + 48.0 * self.sign()
    }

    /// The real root `z_+-(mu)`.
    pub fn root(self, mu: &AdmissibleMu) -> f64 {
        match self {
            Branch::Plus => z_plus(mu),
            Branch::Minus => z_minus(mu),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = Pi2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(Pi2Error::Config(format!("unknown branch `{other}` (expected plus or minus)"))),
        }
    }
}

/// Outcome of [`mu_admissible`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub mu: f64,
    pub bound: f64,
    /// Discriminant of the branch cubic; negative means one real root.
    pub discriminant: f64,
    pub reason: Option<String>,
}

/// `mu` is admissible iff `mu <= bound` and the branch cubic has exactly one
/// real root. The discriminant `55296 mu^3 - 62208` is the same for both
/// branches.
pub fn mu_admissible(mu: f64, bound: f64) -> Admissibility {
    let discriminant = 55296.0 * mu * mu * mu - 62208.0;
    let reason = if !mu.is_finite() {
        Some("mu is not finite".to_string())
    } else if mu > bound {
        Some(format!("mu exceeds the bound {bound}"))
    } else if discriminant >= 0.0 {
        Some("branch cubic has three real roots".to_string())
    } else if bound >= critical_mu() {
        Some(format!("bound {bound} is not below {:.6}", critical_mu()))
    } else {
        None
    };
    Admissibility { admissible: reason.is_none(), mu, bound, discriminant, reason }
}

/// A value of `mu` that passed [`mu_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleMu {
    mu: f64,
    bound: f64,
}

impl AdmissibleMu {
    pub fn new(mu: f64) -> Result<Self> {
        Self::with_bound(mu, DEFAULT_MU_BOUND)
    }

    pub fn with_bound(mu: f64, bound: f64) -> Result<Self> {
        let a = mu_admissible(mu, bound);
        match a.reason {
            None => Ok(AdmissibleMu { mu, bound }),
            Some(reason) => Err(Pi2Error::Inadmissible { mu, bound, reason }),
        }
    }

    pub fn value(&self) -> f64 {
        self.mu
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Lower end of the bracket containing `z_plus`.
pub fn z_plus_lower_bracket() -> f64 {
    -480f64.cbrt()
}

/// The unique real root of `z^3 - 24 mu z + 48 = 0`, in `(-480^(1/3), 0)`.
pub fn z_plus(mu: &AdmissibleMu) -> f64 {
    let mu = mu.value();
    let f = |z: f64| z * z * z - 24.0 * mu * z + 48.0;
    let df = |z: f64| 3.0 * z * z - 24.0 * mu;
    let (mut lo, mut hi) = (z_plus_lower_bracket(), 0.0);
    // f(lo) < 0 < f(hi)
    let mut z = if mu < -10.0 { 2.0 / mu } else { -2.0 * 6f64.cbrt() };
    for _ in 0..200 {
        let fz = f(z);
        if fz == 0.0 {
            return z;
        }
        if fz < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let step = fz / df(z);
        let mut next = z - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * z.abs() {
            z = next;
            break;
        }
        z = next;
    }
    z
}

/// `-z_plus(mu)`.
pub fn z_minus(mu: &AdmissibleMu) -> f64 {
    -z_plus(mu)
}

/// `z_plus(mu) - z_plus(0)`, accurate to a few ulps of the difference itself
/// (not of `z_plus`). Solves `3 z0^2 d + 3 z0 d^2 + d^3 - 24 mu (z0 + d) = 0`.
pub fn z_plus_shift(mu: &AdmissibleMu) -> f64 {
    let z0 = -2.0 * 6f64.cbrt();
    let m = mu.value();
    let g = |d: f64| ((d + 3.0 * z0) * d + 3.0 * z0 * z0 - 24.0 * m) * d - 24.0 * m * z0;
    let dg = |d: f64| 3.0 * d * d + 6.0 * z0 * d + 3.0 * z0 * z0 - 24.0 * m;
    let mut d = z_plus(mu) - z0;
    for _ in 0..8 {
        let step = g(d) / dg(d);
        d -= step;
        if step.abs() <= f64::EPSILON * d.abs() {
            break;
        }
    }
    d
}

/// One term `coeff * 6^(sixth_exponent/3) * mu^power` of the small-`mu`
/// series of `z_+-`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSeriesTerm {
    pub power: usize,
    pub coeff: Rational,
    /// Exponent `k` of `6^(k/3)`.
    pub cube_root_six_exponent: i32,
}

impl ZSeriesTerm {
    pub fn value(&self) -> f64 {
        rational_to_f64(&self.coeff) * 6f64.cbrt().powi(self.cube_root_six_exponent)
    }
}

impl fmt::Display for ZSeriesTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*6^({}/3)*mu^{}", self.coeff, self.cube_root_six_exponent, self.power)
    }
}

/// Coefficients of `mu^0 .. mu^order` of `z_+-(mu)` (minus branch negated).
///
/// With `z = 6^(1/3) y` and `nu = 6^(-2/3) mu` the cubic becomes
/// `y^3 - 24 nu y + 8 = 0`, whose root near `-2` has a rational power series
/// in `nu`; the `mu^j` coefficient is therefore rational times `6^((1-2j)/3)`.
pub fn z_series_small_mu(branch: Branch, order: usize) -> Vec<ZSeriesTerm> {
    // y = -2 + eta, 12 eta = 6 eta^2 - eta^3 - 48 nu + 24 nu eta
    let n = order + 1;
    let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![q(0, 1); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut eta = vec![q(0, 1); n];
    for _ in 0..n {
        let eta2 = mul(&eta, &eta);
        let eta3 = mul(&eta2, &eta);
        let mut next = vec![q(0, 1); n];
        for j in 0..n {
            let mut v = q(6, 1) * &eta2[j] - &eta3[j];
            if j == 1 {
                v -= q(48, 1);
            }
            if j >= 1 {
                v += q(24, 1) * &eta[j - 1];
            }
            next[j] = v / q(12, 1);
        }
        eta = next;
    }
    let sign = q(branch.sign_i64(), 1);
    (0..n)
        .map(|j| {
            let b = if j == 0 { q(-2, 1) } else { eta[j].clone() };
            ZSeriesTerm { power: j, coeff: b * &sign, cube_root_six_exponent: 1 - 2 * j as i32 }
        })
        .collect()
}

/// Partial sum of [`z_series_small_mu`] at `mu`.
pub fn z_series_partial_sum(terms: &[ZSeriesTerm], mu: f64) -> f64 {
    terms.iter().rev().fold(0.0, |acc, t| acc + t.value() * mu.powi(t.power as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cbrt6() -> f64 {
        6f64.cbrt()
    }

    #[test]
    fn root_at_zero() {
        let z = z_plus(&AdmissibleMu::new(0.0).unwrap());
        assert!((z + 2.0 * cbrt6()).abs() < 1e-15);
        assert!((z + 3.6342412).abs() < 1e-7);
    }

    #[test]
    fn root_at_minus_five_sixths() {
        let mu = AdmissibleMu::new(-5.0 / 6.0).unwrap();
        assert!((z_plus(&mu) + 2.0).abs() < 1e-15);
        assert!((z_minus(&mu) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn root_far_left() {
        let mu = AdmissibleMu::new(-1000.0).unwrap();
        let z = z_plus(&mu);
        assert!((z + 0.002).abs() < 1e-8);
        let r = Branch::Plus.cubic(z, -1000.0);
        assert!(r.abs() <= 1e-14 * 48.0);
    }

    #[test]
    fn admissibility_examples() {
        assert!(mu_admissible(0.4, 0.43).admissible);
        assert!(!mu_admissible(0.5, 0.43).admissible);
        assert!(mu_admissible(-1e6, 0.43).admissible);
        assert!(AdmissibleMu::new(0.44).is_err());
    }

    #[test]
    fn series_first_terms() {
        let s = z_series_small_mu(Branch::Plus, 4);
        assert_eq!(s[0].coeff, q(-2, 1));
        assert_eq!(s[0].cube_root_six_exponent, 1);
        // -4 * 6^(-1/3) written as (-2/3) 6^(2/3) * 6^(-1) = -4 6^(-1/3)
        assert!((s[1].value() + 4.0 / cbrt6()).abs() < 1e-15);
        assert_eq!(s[2].coeff, q(0, 1));
        assert!((s[3].value() - 4.0 * cbrt6() / 27.0).abs() < 1e-15);
        assert!((s[4].value() + 4.0 * cbrt6() * cbrt6() / 81.0).abs() < 1e-15);
        let m = z_series_small_mu(Branch::Minus, 4);
        assert_eq!(m[3].coeff, -s[3].coeff.clone());
    }

    #[test]
    fn shift_matches_direct_difference() {
        for mu in [0.3, 0.01, -0.2, -5.0] {
            let a = AdmissibleMu::new(mu).unwrap();
            let direct = z_plus(&a) + 2.0 * cbrt6();
            assert!((z_plus_shift(&a) - direct).abs() < 1e-14 * (1.0 + direct.abs()));
        }
    }
}
