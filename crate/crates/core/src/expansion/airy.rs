use serde::Serialize;

use crate::algebra::{q, Rational};

/// The constants `t_hat_k`, `t_k` of the Airy parametrix expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AiryConstants {
    pub k: usize,
    #[serde(serialize_with = "crate::expansion::table::ser_rational")]
    pub t_hat: Rational,
    #[serde(serialize_with = "crate::expansion::table::ser_rational")]
    pub t: Rational,
}

/// `t_hat_k = prod_{j=k}^{3k-1} (j + 1/2) / (36^k k!)` and
/// `t_k = -(6k+1)/(6k-1) t_hat_k`.
///
/// # Panics
/// If `k == 0`.
pub fn airy_constants(k: usize) -> AiryConstants {
    assert!(k >= 1, "Airy constants are indexed from k = 1");
    let mut t_hat = q(1, 1);
    for j in k..3 * k {
        t_hat *= q(2 * j as i64 + 1, 2);
    }
    for i in 1..=k {
        t_hat /= q(36 * i as i64, 1);
    }
    let ki = k as i64;
    let t = -(&t_hat * q(6 * ki + 1, 6 * ki - 1));
    AiryConstants { k, t_hat, t }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_constants() {
        let a1 = airy_constants(1);
        assert_eq!(a1.t_hat, q(5, 48));
        assert_eq!(a1.t, q(-7, 48));
        assert_eq!(airy_constants(2).t_hat, q(385, 4608));
    }

    #[test]
    fn ratio_law() {
        for k in 1..=5i64 {
            let a = airy_constants(k as usize);
            assert_eq!(&a.t / &a.t_hat, q(-(6 * k + 1), 6 * k - 1));
            assert!(a.t_hat > q(0, 1));
        }
    }
}
