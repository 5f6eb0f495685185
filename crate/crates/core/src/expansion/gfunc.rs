use crate::algebra::{q, LaurentSeries, RationalFunction};
use crate::branch::Branch;

/// Coefficients of `g = w^(3/2) (c3 + c2 w + c1 w^2)`, `w = zeta - z`, with
/// `mu` eliminated through the branch cubic.
#[derive(Debug, Clone, PartialEq)]
pub struct GCoefficients {
    pub branch: Branch,
    pub c1: RationalFunction,
    pub c2: RationalFunction,
    pub c3: RationalFunction,
}

impl GCoefficients {
    /// `c3 + c2 w + c1 w^2` as an exact series in `w`.
    pub fn polynomial_factor(&self) -> LaurentSeries<RationalFunction> {
        LaurentSeries::exact(0, vec![self.c3.clone(), self.c2.clone(), self.c1.clone()])
    }

    /// `1 / (z^2 - 8 mu) = 1 / (24 c3)`.
    pub fn inverse_gap(&self) -> RationalFunction {
        self.c3.scale(&q(24, 1)).recip().expect("c3 is a nonzero rational function")
    }
}

/// `c1 = 1/105`, `c2 = z/30`, `c3 = z^2/24 - mu/3`; the latter becomes
/// `(z^3 -+ 24)/(36 z)` on the plus/minus branch.
pub fn g_coeffs(branch: Branch) -> GCoefficients {
    let z = RationalFunction::z();
    let z2 = &z * &z;
    let c3 = &z2.scale(&q(1, 24)) - &branch.mu_of_z().scale(&q(1, 3));
    GCoefficients {
        branch,
        c1: RationalFunction::from_ratio(1, 105),
        c2: z.scale(&q(1, 30)),
        c3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    fn c3_closed_form(branch: Branch) -> RationalFunction {
        RationalFunction::new(Poly::from_i64s(&[-24 * branch.sign_i64(), 0, 0, 1]), Poly::from_i64s(&[0, 36]))
            .unwrap()
    }

    #[test]
    fn c3_after_elimination() {
        for b in [Branch::Plus, Branch::Minus] {
            assert_eq!(g_coeffs(b).c3, c3_closed_form(b));
        }
    }

    #[test]
    fn c3_at_mu_zero() {
        let z = -2.0 * 6f64.cbrt();
        let v = g_coeffs(Branch::Plus).c3.eval_f64(z).unwrap();
        assert!((v - 6f64.powf(-1.0 / 3.0)).abs() < 1e-15);
        assert!((v - 0.55032).abs() < 1e-5);
    }

    #[test]
    fn inverse_gap_closed_form() {
        let s = g_coeffs(Branch::Plus).inverse_gap();
        let expected =
            RationalFunction::new(Poly::from_i64s(&[0, 3]), Poly::from_i64s(&[-48, 0, 0, 2])).unwrap();
        assert_eq!(s, expected);
        let z = -2.0 * 6f64.cbrt();
        assert!((s.eval_f64(z).unwrap() - 1.0 / (4.0 * 6f64.powf(2.0 / 3.0))).abs() < 1e-16);
    }
}
