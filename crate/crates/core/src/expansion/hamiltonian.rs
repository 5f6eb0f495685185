use crate::algebra::{q, RationalFunction};
use crate::branch::Branch;

use super::g_coeffs;

/// Leading and first-correction coefficients of the Hamiltonian expansions
/// `H1 ~ a1 |x|^(4/3) + b1 |x|^(-1)` and `H2 ~ a2 |x|^(5/3) + b2 |x|^(-2/3)`,
/// as rational functions of `z` with `mu` eliminated.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianCoefficients {
    pub branch: Branch,
    pub h1_leading: RationalFunction,
    pub h1_correction: RationalFunction,
    pub h2_leading: RationalFunction,
    pub h2_correction: RationalFunction,
}

/// `a1 = +-z/4 - z^4/384`, `b1 = (4z/3)/(z^2 - 8mu)^2`,
/// `a2 = z^5/320 +- 3z^2/8 - mu z^3/8`, `b2 = (3z^2 - 8mu)/(z^2 - 8mu)^2`.
pub fn h_expansion_coeffs(branch: Branch) -> HamiltonianCoefficients {
    let s = q(branch.sign_i64(), 1);
    let z = RationalFunction::z();
    let z2 = &z * &z;
    let z3 = &z2 * &z;
    let mu = branch.mu_of_z();
    let inv_gap = g_coeffs(branch).inverse_gap();
    let inv_gap2 = &inv_gap * &inv_gap;

    let h1_leading = &z.scale(&(&s * q(1, 4))) - &(&z3 * &z).scale(&q(1, 384));
    let h1_correction = &z.scale(&q(4, 3)) * &inv_gap2;
    let h2_leading = &(&(&z3 * &z2).scale(&q(1, 320)) + &z2.scale(&(&s * q(3, 8)))) - &(&mu * &z3).scale(&q(1, 8));
    let h2_correction = &(&z2.scale(&q(3, 1)) - &mu.scale(&q(8, 1))) * &inv_gap2;
    HamiltonianCoefficients { branch, h1_leading, h1_correction, h2_leading, h2_correction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    #[test]
    fn h1_leading_at_mu_zero() {
        let c = h_expansion_coeffs(Branch::Plus);
        let z = -2.0 * 6f64.cbrt();
        let v = c.h1_leading.eval_f64(z).unwrap();
        assert!((v + 0.75 * 6f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn h1_correction_closed_form() {
        let c = h_expansion_coeffs(Branch::Plus);
        let expected = RationalFunction::new(
            Poly::from_i64s(&[0, 0, 0, 3]),
            Poly::from_i64s(&[-24, 0, 0, 1]).pow(2),
        )
        .unwrap();
        assert_eq!(c.h1_correction, expected);
    }

    #[test]
    fn h2_correction_at_mu_zero() {
        let c = h_expansion_coeffs(Branch::Plus);
        let z = -2.0 * 6f64.cbrt();
        let v = c.h2_correction.eval_f64(z).unwrap();
        assert!((v - 3.0 / (z * z)).abs() < 1e-15);
    }
}
